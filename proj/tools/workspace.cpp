#include "workspace.hpp"

#include "tfnp/error.hpp"
#include "tfnp/logic.hpp"

#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>

namespace tfnp::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::size_t positive(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0)
    throw InputError(std::string("config: ") + key + " must be a positive integer");
  return j.get<std::size_t>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

json read_json(const fs::path& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

WorkspaceConfig load_config(const fs::path& path) {
  WorkspaceConfig c;
  const auto j = read_json(path);
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "gate_cap") c.gate_cap = positive(v, "gate_cap");
    else if (key == "solver_max_bits") c.solver_max_bits = positive(v, "solver_max_bits");
    else if (key == "max_domain") c.max_domain = positive(v, "max_domain");
    else if (key == "max_tuples") c.max_tuples = positive(v, "max_tuples");
    else if (key == "seed") {
      if (!v.is_number_unsigned()) throw InputError("config: seed must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "data_dir") {
      c.data_dir = resolve(path.parent_path(), v.get<std::string>()).string();
    } else {
      throw InputError("config: unknown key " + key);
    }
  }
  return c;
}

json to_json(const WorkspaceConfig& c) {
  return {{"gate_cap", c.gate_cap}, {"solver_max_bits", c.solver_max_bits}, {"max_domain", c.max_domain},
          {"max_tuples", c.max_tuples}, {"seed", c.seed}, {"data_dir", c.data_dir}};
}

BitString parse_instance(const std::string& text) {
  auto bad = [&](const std::string& why) { return InputError("malformed instance '" + text + "': " + why); };
  if (text.rfind("text:", 0) == 0) return BitString::from_bytes(text.substr(5));
  if (text.rfind("0b", 0) == 0) return BitString::parse(text.substr(2));
  if (text.rfind("0x", 0) == 0) {
    BitString out;
    for (char ch : text.substr(2)) {
      if (!std::isxdigit(static_cast<unsigned char>(ch))) throw bad("not a hex digit");
      const int v = std::isdigit(static_cast<unsigned char>(ch)) ? ch - '0' : std::tolower(ch) - 'a' + 10;
      out.append(BitString::from_uint(static_cast<std::uint64_t>(v), 4));
    }
    return out;
  }
  if (text.find(':') != std::string::npos) {
    try {
      return BitString::from_hex(text);
    } catch (const std::exception& e) {
      throw bad(e.what());
    }
  }
  if (text.empty() || text.size() > 19) throw bad("expected a decimal number below 10^19");
  for (char ch : text)
    if (!std::isdigit(static_cast<unsigned char>(ch))) throw bad("expected decimal, 0x, 0b, len:hex or text:");
  return BitString::from_uint(std::stoull(text));
}

json describe_bits(const BitString& b) {
  json j = {{"bits", b.to_string()}, {"length", b.size()}, {"hex", b.to_hex()}};
  if (b.size() <= 64) j["value"] = b.to_uint();
  return j;
}

std::string show_bits(const BitString& b) {
  std::ostringstream os;
  if (b.size() <= 64) {
    os << "0x" << std::hex << b.to_uint() << std::dec << " = " << b.to_uint();
  } else {
    os << b.to_hex();
  }
  os << " (bits \"" << b.to_string() << "\")";
  return os.str();
}

core::TFNPProblem load_problem(const json& j, const fs::path& base, const WorkspaceConfig& config) {
  if (!j.is_object() || !j.contains("problem")) throw InputError("problem description needs a \"problem\" key");
  const auto kind = j.at("problem").get<std::string>();
  core::TFNPProblem p;
  if (kind == "FACTORING") {
    p = core::factoring_problem();
  } else if (kind == "SUCC") {
    p = core::succ_problem();
  } else if (kind == "ADD") {
    p = core::add_const_problem(j.value("k", 1u));
  } else if (kind == "PIGEON") {
    p = core::pigeon_problem(core::pigeon_family_by_name(j.value("family", std::string("identity")), config.seed));
  } else if (kind == "HCS") {
    const auto s = j.value("sentence", std::string("php"));
    p = core::hcs_problem(s == "php" ? core::php_sentence() : logic::parse_sentence_file(slurp(resolve(base, s))));
  } else if (kind == "U") {
    p = core::universal_problem(std::make_shared<const core::Registry>(core::default_registry()));
  } else {
    throw InputError("unknown problem " + kind);
  }
  if (j.value("padded", false)) p = core::normalize_padding(p);
  return p;
}

LoadedReduction load_reduction(const json& j, const fs::path& base, const WorkspaceConfig& config) {
  if (!j.is_object() || !j.contains("reduction")) throw InputError("reduction description needs a \"reduction\" key");
  const auto kind = j.at("reduction").get<std::string>();
  LoadedReduction out;
  auto problem = [&](const char* key) {
    if (!j.contains(key)) throw InputError(kind + " reduction needs \"" + key + "\"");
    return load_problem(j.at(key), base, config);
  };
  if (kind == "identity" || kind == "broken") {
    out.reduction = kind == "identity" ? core::identity_reduction() : core::broken_reduction();
    out.source = problem("source");
    out.target = j.contains("target") ? problem("target") : out.source;
  } else if (kind == "pigeon-hcs") {
    const auto fam = core::pigeon_family_by_name(j.value("family", std::string("identity")), config.seed);
    out.reduction = core::pigeon_to_hcs_reduction(fam);
    out.source = core::pigeon_problem(fam);
    out.target = core::hcs_problem(core::php_sentence());
  } else if (kind == "embed") {
    auto reg = std::make_shared<const core::Registry>(core::default_registry());
    const auto name = j.at("name").get<std::string>();
    const auto* entry = reg->find(name);
    if (!entry) throw InputError("no registered problem " + name);
    out.reduction = core::embed_reduction(reg, name);
    out.source = entry->problem;
    out.target = core::universal_problem(reg);
    out.domain = entry->test_domain;
  } else if (kind == "compose") {
    auto first = load_reduction(j.at("first"), base, config);
    auto second = load_reduction(j.at("second"), base, config);
    out.reduction = core::compose(first.reduction, second.reduction);
    out.source = first.source;
    out.target = second.target;
    out.domain = first.domain;
    out.domain_spec = first.domain_spec;
  } else {
    throw InputError("unknown reduction " + kind);
  }
  if (j.contains("domain")) out.domain_spec = j.at("domain");
  return out;
}

std::vector<BitString> parse_domain(const json& spec, std::size_t limit, bool* truncated) {
  std::vector<BitString> out;
  // False once the limit is reached.
  auto push = [&](BitString b) {
    if (out.size() < limit) {
      out.push_back(std::move(b));
      return true;
    }
    if (!truncated) throw ResourceLimit("domain has more than " + std::to_string(limit) + " instances");
    *truncated = true;
    return false;
  };
  if (spec.is_array()) {
    for (const auto& e : spec)
      if (!push(parse_instance(e.is_string() ? e.get<std::string>() : e.dump()))) break;
    return out;
  }
  const auto text = spec.get<std::string>();
  if (text.rfind("strings:", 0) == 0) {
    const auto n = std::stoull(text.substr(8));
    if (n > 24) throw ResourceLimit("strings:" + std::to_string(n) + " is too many instances");
    for (auto& s : core::strings_up_to(n))
      if (!push(std::move(s))) break;
    return out;
  }
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw InputError("domain must be a..b, strings:n or a list: " + text);
  const auto lo = parse_instance(text.substr(0, dots)).to_uint();
  const auto hi = parse_instance(text.substr(dots + 2)).to_uint();
  if (lo > hi) throw InputError("empty domain " + text);
  for (auto v = lo;; ++v)
    if (!push(BitString::from_uint(v)) || v == hi) break;
  return out;
}

}  // namespace tfnp::cli
