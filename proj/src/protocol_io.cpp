#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "locklab/errors.hpp"
#include "locklab/protocols.hpp"

namespace locklab {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_block(const std::vector<int>& block) {
  std::string s;
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(block[i]);
  }
  return s;
}

std::string custom_spec(const std::vector<LocalProjector>& projectors) {
  std::string s = "custom(";
  for (std::size_t p = 0; p < projectors.size(); ++p) {
    if (p) s += '|';
    const auto& vectors = projectors[p].basis_vectors();
    for (std::size_t v = 0; v < vectors.size(); ++v) {
      if (v) s += ';';
      for (std::size_t e = 0; e < vectors[v].size(); ++e) {
        if (e) s += ',';
        const Complex z = vectors[v][e];
        s += format_number(z.real());
        if (z.imag() != 0.0) s += ':' + format_number(z.imag());
      }
    }
  }
  return s + ")";
}

void write_node(std::ostream& out, const ProtocolNode& node, int indent, const std::string& label) {
  out << std::string(indent, ' ');
  if (!label.empty()) out << label << ": ";
  if (node.is_leaf()) {
    out << "leaf guess=" << (node.guess ? std::to_string(*node.guess) : "abstain") << "\n";
    return;
  }
  out << "node block=" << join_block(node.block) << " measure=";
  if (node.measure == MeasureKind::Custom) {
    out << custom_spec(node.projectors);
  } else {
    out << to_string(node.measure);
  }
  out << "\n";
  for (std::size_t i = 0; i < node.children.size(); ++i) write_node(out, node.children[i], indent + 2, node.labels[i]);
}

struct Line {
  std::size_t number;
  int indent;
  std::string text;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_number(const std::string& token, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(line, "bad number '" + token + "'");
  }
}

std::vector<int> parse_block(const std::string& text, std::size_t line) {
  std::vector<int> block;
  for (const auto& item : split(text, ',')) {
    const double v = parse_number(item, line);
    if (v != static_cast<int>(v) || v < 1) throw ParseError(line, "bad party index '" + item + "'");
    block.push_back(static_cast<int>(v));
  }
  if (block.empty()) throw ParseError(line, "empty block");
  return block;
}

std::vector<LocalProjector> parse_custom(const std::string& spec, const std::vector<int>& block, std::size_t line) {
  std::vector<LocalProjector> projectors;
  for (const auto& proj : split(spec, '|')) {
    std::vector<std::vector<Complex>> vectors;
    for (const auto& vec : split(proj, ';')) {
      std::vector<Complex> v;
      for (const auto& entry : split(vec, ',')) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos) {
          v.emplace_back(parse_number(entry, line), 0.0);
        } else {
          v.emplace_back(parse_number(entry.substr(0, colon), line), parse_number(entry.substr(colon + 1), line));
        }
      }
      vectors.push_back(std::move(v));
    }
    try {
      projectors.emplace_back(block, std::move(vectors));
    } catch (const Error& e) {
      throw ParseError(line, std::string("invalid custom projector: ") + e.what());
    }
  }
  return projectors;
}

class TreeParser {
 public:
  explicit TreeParser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  ProtocolNode parse_root() {
    if (lines_.empty()) throw ParseError(0, "protocol has no nodes");
    auto node = parse(0, nullptr);
    if (pos_ != lines_.size()) throw ParseError(lines_[pos_].number, "unexpected line after the protocol tree");
    return node;
  }

 private:
  ProtocolNode parse(int indent, std::string* label_out) {
    const Line& line = lines_[pos_];
    if (line.indent != indent) throw ParseError(line.number, "unexpected indentation");
    std::string text = line.text;
    if (label_out) {
      const auto colon = text.find(": ");
      if (colon == std::string::npos) throw ParseError(line.number, "child line lacks an outcome label");
      *label_out = text.substr(0, colon);
      text = text.substr(colon + 2);
    }
    ++pos_;
    std::istringstream words(text);
    std::string head;
    words >> head;
    std::map<std::string, std::string> fields;
    std::string word;
    while (words >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos) throw ParseError(line.number, "expected key=value, got '" + word + "'");
      fields[word.substr(0, eq)] = word.substr(eq + 1);
    }
    if (head == "leaf") {
      if (!fields.count("guess") || fields.size() != 1) throw ParseError(line.number, "leaf needs guess=");
      if (fields["guess"] == "abstain") return ProtocolNode::abstain();
      const double g = parse_number(fields["guess"], line.number);
      if (g < 0 || g != static_cast<std::size_t>(g)) throw ParseError(line.number, "bad guess");
      return ProtocolNode::leaf(static_cast<std::size_t>(g));
    }
    if (head != "node") throw ParseError(line.number, "expected 'node' or 'leaf'");
    if (!fields.count("block") || !fields.count("measure")) {
      throw ParseError(line.number, "node needs block= and measure=");
    }
    const auto block = parse_block(fields["block"], line.number);
    const std::string measure = fields["measure"];

    std::vector<std::string> labels;
    std::vector<ProtocolNode> children;
    while (pos_ < lines_.size() && lines_[pos_].indent > indent) {
      std::string label;
      children.push_back(parse(indent + 2, &label));
      labels.push_back(label);
    }

    try {
      if (measure == "zbasis" || measure == "xbasis") {
        return ProtocolNode::product(measure == "xbasis" ? PauliBasis::X : PauliBasis::Z, block, std::move(labels),
                                     std::move(children));
      }
      std::vector<LocalProjector> projectors;
      std::vector<std::string> expected;
      MeasureKind kind;
      if (measure == "pairparity") {
        kind = MeasureKind::PairParity;
        projectors = pair_parity_projectors(block);
        expected = {"even", "odd"};
      } else if (measure == "triple4") {
        kind = MeasureKind::Triple4;
        projectors = triple4_projectors(block);
        expected = {"0", "1", "2", "3"};
      } else if (measure.rfind("custom(", 0) == 0 && measure.back() == ')') {
        kind = MeasureKind::Custom;
        projectors = parse_custom(measure.substr(7, measure.size() - 8), block, line.number);
        for (std::size_t i = 0; i < projectors.size(); ++i) expected.push_back(std::to_string(i));
      } else {
        throw ParseError(line.number, "unknown measurement '" + measure + "'");
      }
      std::vector<ProtocolNode> ordered;
      for (const auto& want : expected) {
        std::size_t found = labels.size();
        for (std::size_t i = 0; i < labels.size(); ++i) {
          if (labels[i] == want) found = i;
        }
        if (found == labels.size()) throw ParseError(line.number, "missing child for outcome '" + want + "'");
        ordered.push_back(std::move(children[found]));
      }
      if (labels.size() != expected.size()) throw ParseError(line.number, "unexpected outcome labels");
      return ProtocolNode::projective(kind, std::move(projectors), std::move(expected), std::move(ordered));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line.number, e.what());
    }
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_protocol(std::ostream& out, const Protocol& protocol) {
  out << "# locklab protocol\n";
  out << "m=" << protocol.partition.num_parties() << "\n";
  out << "partition=" << protocol.partition.to_string() << "\n";
  out << "origin=" << to_string(protocol.origin) << "\n";
  write_node(out, protocol.root, 0, "");
}

Protocol read_protocol(std::istream& in) {
  std::string raw;
  std::size_t number = 0;
  std::map<std::string, std::pair<std::string, std::size_t>> header;
  std::vector<Line> lines;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(' ');
    if (first == std::string::npos || raw[first] == '#') continue;
    const std::string text = raw.substr(first);
    if (lines.empty() && first == 0 && text.rfind("node", 0) != 0 && text.rfind("leaf", 0) != 0) {
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw ParseError(number, "expected header key=value");
      header[text.substr(0, eq)] = {text.substr(eq + 1), number};
      continue;
    }
    if (first % 2 != 0) throw ParseError(number, "indentation must be a multiple of two spaces");
    lines.push_back({number, static_cast<int>(first), text});
  }
  if (!header.count("m") || !header.count("partition")) throw ParseError(number, "missing m= or partition= header");
  Protocol protocol;
  const auto& [mtext, mline] = header["m"];
  const double m = parse_number(mtext, mline);
  if (m < 1 || m > kMaxQubits || m != static_cast<int>(m)) throw ParseError(mline, "m out of range");
  try {
    protocol.partition = Partition::parse(static_cast<int>(m), header["partition"].first);
  } catch (const Error& e) {
    throw ParseError(header["partition"].second, e.what());
  }
  protocol.origin = ProtocolOrigin::Custom;
  if (header.count("origin")) {
    const auto& origin = header["origin"].first;
    bool known = false;
    for (auto o : {ProtocolOrigin::PairingPeel, ProtocolOrigin::DerivedOdd, ProtocolOrigin::CoalitionAttack,
                   ProtocolOrigin::Custom}) {
      if (to_string(o) == origin) {
        protocol.origin = o;
        known = true;
      }
    }
    if (!known) throw ParseError(header["origin"].second, "unknown origin '" + origin + "'");
  }
  protocol.root = TreeParser(std::move(lines)).parse_root();
  return protocol;
}

void save_protocol(const std::string& path, const Protocol& protocol) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  write_protocol(out, protocol);
}

Protocol load_protocol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  return read_protocol(in);
}

}  // namespace locklab
