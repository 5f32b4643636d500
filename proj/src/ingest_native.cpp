#include <fstream>
#include <sstream>

#include "nwt/ingest.hpp"
#include "text_util.hpp"

namespace nwt {

namespace {

using detail::trim;

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    if (p == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, p - start)));
    start = p + 1;
  }
}

// Accepts "key=value" and returns value, or empty on mismatch.
std::string_view keyed(std::string_view token, std::string_view key) {
  if (token.size() > key.size() + 1 && token.substr(0, key.size()) == key &&
      token[key.size()] == '=') {
    return token.substr(key.size() + 1);
  }
  return {};
}

struct PendingSpecies {
  InitMode mode;
  double conc = 0.0;  // used when mode == concentration
};

// Species references are bare ids, or <compartment>:<id> when the bare id
// is ambiguous across compartments.
int resolve_species(const MembraneSystem& sys, std::string_view token, int line) {
  const std::size_t colon = token.find(':');
  if (colon != std::string_view::npos) {
    const auto comp = token.substr(0, colon);
    const auto id = token.substr(colon + 1);
    const int s = sys.find_species_in(comp, id);
    if (s < 0) {
      throw ParseError(line, "unknown species '" + std::string(token) + "'");
    }
    return s;
  }
  const int s = sys.find_species(token);
  if (s == -2) {
    throw ParseError(line, "species id '" + std::string(token) +
                               "' is ambiguous; qualify as <compartment>:" +
                               std::string(token));
  }
  if (s < 0) {
    throw ParseError(line, "unknown species '" + std::string(token) + "'");
  }
  return s;
}

}  // namespace

ModelDocument parse_native_document(std::string_view text, std::string source) {
  ModelDocument doc;
  doc.source = std::move(source);
  doc.format = ModelFormat::native;
  MembraneSystem& sys = doc.system;
  std::vector<PendingSpecies> pending;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto tokens = split_ws(line);
    const std::string_view kw = tokens[0];

    if (kw == "compartment") {
      if (tokens.size() < 3) {
        throw ParseError(line_no, "expected: compartment <id> volume=<liters> [parent=<id>]");
      }
      Compartment c;
      c.id = std::string(tokens[1]);
      bool have_volume = false;
      std::string parent_id;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (auto v = keyed(tokens[i], "volume"); !v.empty()) {
          if (!detail::parse_double(v, c.volume_liters)) {
            throw ParseError(line_no, "bad volume '" + std::string(v) + "'");
          }
          have_volume = true;
        } else if (auto p = keyed(tokens[i], "parent"); !p.empty()) {
          parent_id = std::string(p);
        } else {
          throw ParseError(line_no, "unexpected token '" + std::string(tokens[i]) + "'");
        }
      }
      if (!have_volume) {
        throw ParseError(line_no, "compartment '" + c.id + "' is missing volume=");
      }
      if (!parent_id.empty()) {
        c.parent = sys.find_compartment(parent_id);
        if (c.parent < 0) {
          throw ParseError(line_no, "unknown parent compartment '" + parent_id +
                                        "' (declare parents first)");
        }
      }
      sys.compartments.push_back(std::move(c));
    } else if (kw == "species") {
      if (tokens.size() != 5 || tokens[2] != "in") {
        throw ParseError(line_no,
                         "expected: species <id> in <compartment> (count=<int> | conc=<molar>)");
      }
      Species sp;
      sp.id = std::string(tokens[1]);
      sp.compartment = sys.find_compartment(tokens[3]);
      if (sp.compartment < 0) {
        throw ParseError(line_no, "unknown compartment '" + std::string(tokens[3]) + "'");
      }
      PendingSpecies init;
      if (auto v = keyed(tokens[4], "count"); !v.empty()) {
        long long n = 0;
        if (!detail::parse_int64(v, n)) {
          throw ParseError(line_no, "bad count '" + std::string(v) + "'");
        }
        sp.initial_count = n;
        init.mode = InitMode::count;
      } else if (auto v2 = keyed(tokens[4], "conc"); !v2.empty()) {
        if (!detail::parse_double(v2, init.conc)) {
          throw ParseError(line_no, "bad concentration '" + std::string(v2) + "'");
        }
        init.mode = InitMode::concentration;
      } else {
        throw ParseError(line_no, "species needs count=<int> or conc=<molar>");
      }
      sys.alphabet.push_back(std::move(sp));
      pending.push_back(init);
    } else if (kw == "reaction") {
      // reaction <id>: <lhs> -> <rhs> @ <k>
      const std::size_t kwlen = line.find("reaction") + 8;
      std::string_view rest = trim(line.substr(kwlen));
      const std::size_t colon = rest.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected ':' after reaction id");
      }
      Reaction rx;
      rx.id = std::string(trim(rest.substr(0, colon)));
      if (rx.id.empty()) throw ParseError(line_no, "empty reaction id");
      rest = trim(rest.substr(colon + 1));

      const std::size_t arrow = rest.find("->");
      if (arrow == std::string_view::npos) {
        throw ParseError(line_no, "expected '->' in reaction body");
      }
      const std::string_view lhs = trim(rest.substr(0, arrow));
      std::string_view rhs = trim(rest.substr(arrow + 2));

      const std::size_t at = rhs.rfind('@');
      if (at == std::string_view::npos) {
        throw ParseError(line_no, "expected '@ <rate>' at end of reaction");
      }
      const std::string_view rate_text = trim(rhs.substr(at + 1));
      if (!detail::parse_double(rate_text, rx.k_conc)) {
        throw ParseError(line_no, "bad rate '" + std::string(rate_text) + "'");
      }
      std::string_view products = trim(rhs.substr(0, at));

      if (lhs.empty()) {
        throw ParseError(line_no, "reaction needs at least one reactant");
      }
      for (const auto tok : split_on(lhs, '+')) {
        if (tok.empty()) throw ParseError(line_no, "empty reactant token");
        rx.reactants.push_back(resolve_species(sys, tok, line_no));
      }
      if (!products.empty() && products != "@") {
        for (const auto tok : split_on(products, '+')) {
          if (tok.empty()) throw ParseError(line_no, "empty product token");
          rx.products.push_back(resolve_species(sys, tok, line_no));
        }
      }
      sys.reactions.push_back(std::move(rx));
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(kw) + "'");
    }
  }

  // Deferred concentration -> count conversion (needs compartment volumes,
  // which are known by now).
  doc.init_modes.resize(sys.alphabet.size(), InitMode::count);
  for (std::size_t s = 0; s < sys.alphabet.size(); ++s) {
    doc.init_modes[s] = pending[s].mode;
    if (pending[s].mode == InitMode::concentration) {
      Species& sp = sys.alphabet[s];
      const double volume = sys.compartments[sp.compartment].volume_liters;
      try {
        sp.initial_count = concentration_to_count(pending[s].conc, volume);
      } catch (const std::invalid_argument& e) {
        throw ValidationError({{sp.id, e.what()}});
      }
    }
  }

  finalize(sys);
  return doc;
}

MembraneSystem parse_native(std::string_view text) {
  return parse_native_document(text).system;
}

std::string write_native(const MembraneSystem& system) {
  std::ostringstream os;
  os << "# nwt model\n";

  for (const Compartment& c : system.compartments) {
    os << "compartment " << c.id << " volume=" << detail::format_double(c.volume_liters);
    if (c.parent >= 0) {
      os << " parent=" << system.compartments[c.parent].id;
    }
    os << "\n";
  }
  for (const Species& sp : system.alphabet) {
    os << "species " << sp.id << " in " << system.compartments[sp.compartment].id
       << " count=" << sp.initial_count << "\n";
  }

  // Qualify a species reference only when its bare id is ambiguous.
  const auto ref = [&system](int s) {
    const Species& sp = system.alphabet[s];
    if (system.find_species(sp.id) == -2) {
      return system.compartments[sp.compartment].id + ":" + sp.id;
    }
    return sp.id;
  };

  for (const Reaction& rx : system.reactions) {
    os << "reaction " << rx.id << ": ";
    for (std::size_t i = 0; i < rx.reactants.size(); ++i) {
      if (i) os << " + ";
      os << ref(rx.reactants[i]);
    }
    os << " -> ";
    if (rx.products.empty()) {
      os << "@";
    } else {
      for (std::size_t i = 0; i < rx.products.size(); ++i) {
        if (i) os << " + ";
        os << ref(rx.products[i]);
      }
    }
    os << " @ " << detail::format_double(rx.k_conc) << "\n";
  }
  return os.str();
}

ModelDocument load_model_file(const std::string& path,
                              std::optional<ModelFormat> format_override,
                              SbmlMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open model file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  ModelFormat format;
  if (format_override) {
    format = *format_override;
  } else {
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    format = (ext == "xml" || ext == "sbml") ? ModelFormat::sbml_subset
                                             : ModelFormat::native;
  }
  return format == ModelFormat::native
             ? parse_native_document(text, path)
             : parse_sbml_document(text, mode, path);
}

}  // namespace nwt
