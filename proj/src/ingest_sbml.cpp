#include <cmath>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "nwt/ingest.hpp"
#include "text_util.hpp"

namespace nwt {

namespace {

namespace pt = boost::property_tree;

struct SbmlContext {
  SbmlMode mode;
  std::vector<std::string>* warnings;

  // Strict mode rejects anything outside the mass-action subset; lenient
  // mode records a warning and moves on. Nothing is skipped silently.
  void unsupported(const std::string& what) const {
    const std::string msg = "unsupported SBML feature: " + what;
    if (mode == SbmlMode::strict) throw ParseError(0, msg);
    if (warnings) warnings->push_back(msg);
  }
};

bool is_xmlns(std::string_view name) {
  return name.substr(0, 5) == "xmlns";
}

void check_attributes(const SbmlContext& ctx, const pt::ptree& node,
                      const std::string& element,
                      const std::set<std::string>& allowed) {
  const auto attrs = node.get_child_optional("<xmlattr>");
  if (!attrs) return;
  for (const auto& [name, value] : *attrs) {
    if (allowed.count(name) || is_xmlns(name)) continue;
    ctx.unsupported("attribute '" + name + "' on <" + element + ">");
  }
}

void check_children(const SbmlContext& ctx, const pt::ptree& node,
                    const std::string& element,
                    const std::set<std::string>& allowed) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
    if (!allowed.count(name)) {
      ctx.unsupported("<" + name + "> inside <" + element + ">");
    }
  }
}

double attr_double(const pt::ptree& node, const std::string& name,
                   const std::string& element) {
  const auto text = node.get_optional<std::string>("<xmlattr>." + name);
  if (!text) {
    throw ParseError(0, "<" + element + "> is missing required attribute '" + name + "'");
  }
  double v = 0.0;
  if (!detail::parse_double(detail::trim(*text), v)) {
    throw ParseError(0, "<" + element + ">: cannot parse " + name + "='" + *text + "'");
  }
  return v;
}

std::string attr_string(const pt::ptree& node, const std::string& name,
                        const std::string& element) {
  const auto text = node.get_optional<std::string>("<xmlattr>." + name);
  if (!text || text->empty()) {
    throw ParseError(0, "<" + element + "> is missing required attribute '" + name + "'");
  }
  return *text;
}

// boundaryCondition/constant/reversible-style flags: only an explicit "true"
// changes semantics we do not support.
bool flag_is_true(const pt::ptree& node, const std::string& name) {
  const auto text = node.get_optional<std::string>("<xmlattr>." + name);
  return text && *text == "true";
}

void read_slots(const SbmlContext& ctx, const pt::ptree& list,
                const std::string& element, const MembraneSystem& sys,
                std::vector<int>& slots) {
  check_attributes(ctx, list, element, {});
  check_children(ctx, list, element, {"speciesReference"});
  for (const auto& [name, child] : list) {
    if (name != "speciesReference") continue;
    check_attributes(ctx, child, "speciesReference",
                     {"species", "stoichiometry", "metaid"});
    check_children(ctx, child, "speciesReference", {});
    const std::string id = attr_string(child, "species", "speciesReference");
    const int s = sys.find_species(id);
    if (s < 0) {
      throw ParseError(0, "speciesReference names unknown species '" + id + "'");
    }
    double stoich = 1.0;
    if (child.get_optional<std::string>("<xmlattr>.stoichiometry")) {
      stoich = attr_double(child, "stoichiometry", "speciesReference");
    }
    const long long n = std::llround(stoich);
    if (n < 1 || std::abs(stoich - static_cast<double>(n)) > 1e-9) {
      throw ParseError(0, "stoichiometry must be a positive integer, got '" +
                              detail::format_double(stoich) + "' for species '" + id + "'");
    }
    for (long long i = 0; i < n; ++i) slots.push_back(s);
  }
}

double read_kinetic_constant(const SbmlContext& ctx, const pt::ptree& law,
                             const std::string& reaction_id) {
  check_attributes(ctx, law, "kineticLaw", {"metaid"});
  // The kinetic law is not evaluated as math; it must carry exactly one
  // numeric parameter, read as the mass-action rate constant.
  for (const auto& [name, child] : law) {
    if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
    if (name == "listOfParameters" || name == "listOfLocalParameters") continue;
    ctx.unsupported("<" + name + "> inside <kineticLaw> of reaction '" + reaction_id + "'");
  }
  std::vector<double> values;
  for (const auto& [name, list] : law) {
    if (name != "listOfParameters" && name != "listOfLocalParameters") continue;
    check_attributes(ctx, list, name, {});
    check_children(ctx, list, name, {"parameter", "localParameter"});
    for (const auto& [pname, param] : list) {
      if (pname != "parameter" && pname != "localParameter") continue;
      check_attributes(ctx, param, pname, {"id", "name", "value", "units", "metaid"});
      check_children(ctx, param, pname, {});
      values.push_back(attr_double(param, "value", pname));
    }
  }
  if (values.size() != 1) {
    throw ParseError(0, "kineticLaw of reaction '" + reaction_id +
                            "' must carry exactly one numeric parameter, found " +
                            std::to_string(values.size()));
  }
  return values.front();
}

}  // namespace

ModelDocument parse_sbml_document(std::string_view xml_text, SbmlMode mode,
                                  std::string source) {
  ModelDocument doc;
  doc.source = std::move(source);
  doc.format = ModelFormat::sbml_subset;
  SbmlContext ctx{mode, &doc.warnings};

  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml_text)};
    pt::read_xml(in, tree,
                 pt::xml_parser::no_comments | pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(static_cast<int>(e.line()), "malformed XML: " + e.message());
  }

  const auto sbml = tree.get_child_optional("sbml");
  if (!sbml) {
    throw ParseError(0, "document has no <sbml> root element");
  }
  check_attributes(ctx, *sbml, "sbml", {"level", "version", "metaid"});
  check_children(ctx, *sbml, "sbml", {"model"});
  const auto model = sbml->get_child_optional("model");
  if (!model) {
    throw ParseError(0, "<sbml> has no <model> element");
  }
  check_attributes(ctx, *model, "model", {"id", "name", "metaid"});
  check_children(ctx, *model, "model",
                 {"listOfCompartments", "listOfSpecies", "listOfReactions"});

  MembraneSystem& sys = doc.system;

  if (const auto list = model->get_child_optional("listOfCompartments")) {
    check_attributes(ctx, *list, "listOfCompartments", {});
    check_children(ctx, *list, "listOfCompartments", {"compartment"});
    std::vector<std::string> outside;
    for (const auto& [name, node] : *list) {
      if (name != "compartment") continue;
      check_attributes(ctx, node, "compartment",
                       {"id", "name", "size", "outside", "spatialDimensions",
                        "constant", "units", "metaid"});
      check_children(ctx, node, "compartment", {});
      Compartment c;
      c.id = attr_string(node, "id", "compartment");
      c.volume_liters = attr_double(node, "size", "compartment");
      sys.compartments.push_back(std::move(c));
      outside.push_back(node.get<std::string>("<xmlattr>.outside", ""));
    }
    for (std::size_t i = 0; i < outside.size(); ++i) {
      if (outside[i].empty()) continue;
      const int p = sys.find_compartment(outside[i]);
      if (p < 0) {
        throw ParseError(0, "compartment '" + sys.compartments[i].id +
                                "' names unknown outside compartment '" + outside[i] + "'");
      }
      sys.compartments[i].parent = p;
    }
  }

  if (const auto list = model->get_child_optional("listOfSpecies")) {
    check_attributes(ctx, *list, "listOfSpecies", {});
    check_children(ctx, *list, "listOfSpecies", {"species"});
    for (const auto& [name, node] : *list) {
      if (name != "species") continue;
      check_attributes(ctx, node, "species",
                       {"id", "name", "compartment", "initialAmount",
                        "initialConcentration", "substanceUnits",
                        "hasOnlySubstanceUnits", "boundaryCondition", "constant",
                        "metaid"});
      check_children(ctx, node, "species", {});
      if (flag_is_true(node, "boundaryCondition")) {
        ctx.unsupported("boundaryCondition=\"true\" on species");
      }
      if (flag_is_true(node, "constant")) {
        ctx.unsupported("constant=\"true\" on species");
      }
      Species sp;
      sp.id = attr_string(node, "id", "species");
      const std::string comp = attr_string(node, "compartment", "species");
      sp.compartment = sys.find_compartment(comp);
      if (sp.compartment < 0) {
        throw ParseError(0, "species '" + sp.id + "' names unknown compartment '" + comp + "'");
      }
      const bool has_amount =
          bool(node.get_optional<std::string>("<xmlattr>.initialAmount"));
      const bool has_conc =
          bool(node.get_optional<std::string>("<xmlattr>.initialConcentration"));
      if (has_amount == has_conc) {
        throw ParseError(0, "species '" + sp.id +
                                "' needs exactly one of initialAmount / initialConcentration");
      }
      if (has_amount) {
        sp.initial_count = std::llround(attr_double(node, "initialAmount", "species"));
        doc.init_modes.push_back(InitMode::count);
      } else {
        const double conc = attr_double(node, "initialConcentration", "species");
        const double volume = sys.compartments[sp.compartment].volume_liters;
        try {
          sp.initial_count = concentration_to_count(conc, volume);
        } catch (const std::invalid_argument& e) {
          throw ValidationError({{sp.id, e.what()}});
        }
        doc.init_modes.push_back(InitMode::concentration);
      }
      sys.alphabet.push_back(std::move(sp));
    }
  }

  if (const auto list = model->get_child_optional("listOfReactions")) {
    check_attributes(ctx, *list, "listOfReactions", {});
    check_children(ctx, *list, "listOfReactions", {"reaction"});
    for (const auto& [name, node] : *list) {
      if (name != "reaction") continue;
      check_attributes(ctx, node, "reaction",
                       {"id", "name", "reversible", "fast", "metaid"});
      check_children(ctx, node, "reaction",
                     {"listOfReactants", "listOfProducts", "kineticLaw"});
      Reaction rx;
      rx.id = attr_string(node, "id", "reaction");
      if (flag_is_true(node, "reversible")) {
        ctx.unsupported("reversible=\"true\" on reaction '" + rx.id +
                        "' (split into forward and backward reactions)");
      }
      if (flag_is_true(node, "fast")) {
        ctx.unsupported("fast=\"true\" on reaction '" + rx.id + "'");
      }
      if (const auto l = node.get_child_optional("listOfReactants")) {
        read_slots(ctx, *l, "listOfReactants", sys, rx.reactants);
      }
      if (const auto l = node.get_child_optional("listOfProducts")) {
        read_slots(ctx, *l, "listOfProducts", sys, rx.products);
      }
      const auto law = node.get_child_optional("kineticLaw");
      if (!law) {
        throw ParseError(0, "reaction '" + rx.id + "' has no kineticLaw");
      }
      rx.k_conc = read_kinetic_constant(ctx, *law, rx.id);
      sys.reactions.push_back(std::move(rx));
    }
  }

  finalize(sys);
  return doc;
}

MembraneSystem parse_sbml_subset(std::string_view xml_text, SbmlMode mode,
                                 std::vector<std::string>* warnings) {
  ModelDocument doc = parse_sbml_document(xml_text, mode);
  if (warnings) *warnings = doc.warnings;
  return std::move(doc.system);
}

}  // namespace nwt
