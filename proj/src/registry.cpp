#include "slin/registry.hpp"

#include <charconv>

#include "slin/models.hpp"

namespace slin {
namespace {

std::size_t param(const RegistryRef& r, const std::string& key, std::size_t fallback) {
  for (const auto& [k, v] : r.params) {
    if (k != key) throw UsageError("unknown parameter '" + k + "' for " + r.name);
  }
  const auto it = r.params.find(key);
  return it == r.params.end() ? fallback : it->second;
}

void no_params(const RegistryRef& r) {
  if (!r.params.empty()) throw UsageError(r.name + " takes no parameters");
}

}  // namespace

RegistryRef parse_registry_ref(std::string_view text) {
  RegistryRef out;
  std::size_t pos = text.find(',');
  out.name = std::string(text.substr(0, pos));
  if (out.name.empty()) throw UsageError("empty name");
  while (pos != std::string_view::npos) {
    const auto start = pos + 1;
    pos = text.find(',', start);
    const auto item = text.substr(start, pos == std::string_view::npos ? text.size() - start : pos - start);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw UsageError("expected KEY=VALUE, got '" + std::string(item) + "'");
    }
    const auto value = item.substr(eq + 1);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
      throw UsageError("parameter value must be a non-negative integer: '" + std::string(item) + "'");
    }
    out.params[std::string(item.substr(0, eq))] = n;
  }
  return out;
}

std::shared_ptr<const ObjectModel> make_model(std::string_view ref) {
  const auto r = parse_registry_ref(ref);
  if (r.name == "hw-queue") return hw_model(param(r, "N", 4));
  if (r.name == "ms-queue") return ms_model(param(r, "P", 4));
  if (r.name == "coarse-queue") return coarse_queue_model(param(r, "C", 4));
  throw UsageError("unknown model '" + r.name + "'");
}

std::shared_ptr<const SeqSpec> make_spec(std::string_view ref) {
  const auto r = parse_registry_ref(ref);
  if (r.name == "hw-queue-seq") return hw_queue_seq(param(r, "N", 4));
  if (r.name == "ms-queue-seq") return ms_queue_seq(param(r, "P", 4));
  if (r.name == "coarse-queue-seq") return coarse_queue_seq(param(r, "C", 4));
  no_params(r);
  if (r.name == "adt-queue") return adt_queue();
  if (r.name == "adt-multiset") return adt_multiset();
  if (r.name == "adt-pseudo-queue") return adt_pseudo_queue();
  throw UsageError("unknown specification '" + r.name + "'");
}

AbstractionFunction make_af(std::string_view name) {
  if (name == "af-queue") return af_queue();
  if (name == "af-multiset") return af_multiset();
  if (name == "af-pseudo") return af_pseudo();
  if (name == "af-hw-queue") return af_hw_queue();
  if (name == "af-identity") return af_identity();
  throw UsageError("unknown abstraction function '" + std::string(name) + "'");
}

RenamingFunction default_renaming(const SeqSpec& object, const SeqSpec& adt) {
  if (adt.has_method("Add") && object.has_method("Enqueue")) {
    return RenamingFunction({{"Enqueue", "Add"}, {"Dequeue", "Remove"}});
  }
  return RenamingFunction::identity(object.methods());
}

AbstractionFunction default_af(const SeqSpec& object, const SeqSpec& adt) {
  const auto& o = object.name();
  const auto& a = adt.name();
  if (o == a) return af_identity();
  if (o == "ms-queue-seq") {
    if (a == "adt-queue") return af_queue();
    if (a == "adt-multiset") return af_multiset();
    if (a == "adt-pseudo-queue") return af_pseudo();
  }
  if (o == "hw-queue-seq" && a == "adt-queue") return af_hw_queue();
  if (o == "coarse-queue-seq" && a == "adt-queue") return af_identity();
  throw UsageError("no default abstraction from " + o + " to " + a + "; pass --af");
}

std::vector<std::string> model_names() { return {"coarse-queue", "hw-queue", "ms-queue"}; }

std::vector<std::string> spec_names() {
  return {"adt-multiset",     "adt-pseudo-queue", "adt-queue",
          "coarse-queue-seq", "hw-queue-seq",     "ms-queue-seq"};
}

std::vector<std::string> af_names() {
  return {"af-hw-queue", "af-identity", "af-multiset", "af-pseudo", "af-queue"};
}

}  // namespace slin
