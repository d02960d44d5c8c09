#include "driftnet/bn/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "driftnet/error.hpp"

namespace driftnet::bn {

namespace {

void normalize_rows(Cpt& cpt, LoadMode mode) {
  if (mode == LoadMode::Lenient) return;
  for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
    auto& row = cpt.rows[r];
    double sum = 0.0;
    for (double p : row) sum += p;
    const double deviation = std::abs(sum - 1.0);
    if (deviation > kRenormalizeTolerance) {
      throw FormatError(
          fmt::format("CPT '{}' row {} sums to {:.12g}; not a distribution", cpt.child, r, sum));
    }
    if (deviation > kRowSumTolerance) {
      for (double& p : row) p /= sum;
    }
  }
}

std::string format_double(double v) { return fmt::format("{}", v); }

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

nlohmann::json network_to_json(const Network& net) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : net.variables()) {
    vars.push_back({{"id", v.id()}, {"states", v.states()}});
  }
  nlohmann::json cpts = nlohmann::json::array();
  for (const auto& c : net.cpts()) {
    cpts.push_back({{"child", c.child}, {"parents", c.parents}, {"rows", c.rows}});
  }
  return {{"variables", std::move(vars)}, {"cpts", std::move(cpts)}};
}

Network network_from_json(const nlohmann::json& doc, LoadMode mode) {
  try {
    std::vector<Variable> vars;
    for (const auto& v : doc.at("variables")) {
      vars.emplace_back(v.at("id").get<std::string>(), v.at("states").get<std::vector<std::string>>());
    }
    std::vector<Cpt> cpts;
    for (const auto& c : doc.at("cpts")) {
      Cpt cpt{c.at("child").get<std::string>(),
              c.value("parents", std::vector<std::string>{}),
              c.at("rows").get<std::vector<std::vector<double>>>()};
      normalize_rows(cpt, mode);
      cpts.push_back(std::move(cpt));
    }
    return Network(std::move(vars), std::move(cpts));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("network document: {}", e.what()));
  } catch (const InputError& e) {
    throw FormatError(fmt::format("network document: {}", e.what()));
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string to_xmlbif(const Network& net, const std::string& name) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<BIF VERSION=\"0.3\">\n<NETWORK>\n";
  out += fmt::format("<NAME>{}</NAME>\n", xml_escape(name));
  for (const auto& v : net.variables()) {
    out += "<VARIABLE TYPE=\"nature\">\n";
    out += fmt::format("  <NAME>{}</NAME>\n", xml_escape(v.id()));
    for (const auto& s : v.states()) out += fmt::format("  <OUTCOME>{}</OUTCOME>\n", xml_escape(s));
    out += "</VARIABLE>\n";
  }
  for (const auto& c : net.cpts()) {
    out += "<DEFINITION>\n";
    out += fmt::format("  <FOR>{}</FOR>\n", xml_escape(c.child));
    for (const auto& p : c.parents) out += fmt::format("  <GIVEN>{}</GIVEN>\n", xml_escape(p));
    out += "  <TABLE>";
    bool first = true;
    for (const auto& row : c.rows) {
      for (double p : row) {
        if (!first) out += ' ';
        out += format_double(p);
        first = false;
      }
    }
    out += "</TABLE>\n</DEFINITION>\n";
  }
  out += "</NETWORK>\n</BIF>\n";
  return out;
}

Network from_xmlbif(const std::string& xml, LoadMode mode) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(xml);
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw FormatError(fmt::format("XMLBIF: {}", e.what()));
  }

  const auto* network = tree.get_child_optional("BIF.NETWORK").get_ptr();
  if (!network) throw FormatError("XMLBIF: missing BIF/NETWORK element");

  try {
    std::vector<Variable> vars;
    std::map<std::string, std::size_t> cardinality;
    for (const auto& [tag, node] : *network) {
      if (tag != "VARIABLE") continue;
      std::string id = trim(node.get<std::string>("NAME"));
      std::vector<std::string> states;
      for (const auto& [t, child] : node) {
        if (t == "OUTCOME") states.push_back(trim(child.data()));
      }
      cardinality[id] = states.size();
      vars.emplace_back(std::move(id), std::move(states));
    }

    std::vector<Cpt> cpts;
    for (const auto& [tag, node] : *network) {
      if (tag != "DEFINITION") continue;
      Cpt cpt;
      cpt.child = trim(node.get<std::string>("FOR"));
      for (const auto& [t, child] : node) {
        if (t == "GIVEN") cpt.parents.push_back(trim(child.data()));
      }
      std::vector<double> values;
      std::istringstream table(node.get<std::string>("TABLE"));
      for (std::string token; table >> token;) {
        std::size_t used = 0;
        double v = std::stod(token, &used);
        if (used != token.size()) throw FormatError("XMLBIF: bad TABLE entry '" + token + "'");
        values.push_back(v);
      }
      auto it = cardinality.find(cpt.child);
      if (it == cardinality.end()) {
        throw FormatError("XMLBIF: definition for undeclared variable '" + cpt.child + "'");
      }
      const std::size_t columns = it->second;
      if (values.size() % columns != 0) {
        throw FormatError(fmt::format("XMLBIF: TABLE for '{}' has {} entries, not a multiple of {}",
                                      cpt.child, values.size(), columns));
      }
      for (std::size_t r = 0; r < values.size() / columns; ++r) {
        cpt.rows.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(r * columns),
                              values.begin() + static_cast<std::ptrdiff_t>((r + 1) * columns));
      }
      normalize_rows(cpt, mode);
      cpts.push_back(std::move(cpt));
    }
    return Network(std::move(vars), std::move(cpts));
  } catch (const pt::ptree_error& e) {
    throw FormatError(fmt::format("XMLBIF: {}", e.what()));
  } catch (const std::invalid_argument& e) {
    throw FormatError(fmt::format("XMLBIF: {}", e.what()));
  } catch (const std::out_of_range& e) {
    throw FormatError(fmt::format("XMLBIF: {}", e.what()));
  }
}

}  // namespace driftnet::bn
