#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pneufab {

enum class WeightClass { Light, Medium, Heavy, Film, Conductive };
enum class Coating { TPU, PU, None };

std::string_view to_string(WeightClass c);
std::string_view to_string(Coating c);

/// Welding feed that gave sound bonds for each class of fabric.
double class_feed(WeightClass c);

struct Material {
  std::string name;
  std::string description;
  double areal_weight = 0.0;  // g/m^2, 0 when unpublished
  WeightClass weight_class = WeightClass::Light;
  Coating coating = Coating::TPU;
  double weld_feed = 0.0;  // mm/min
  int ptfe_layers = 1;     // protective sheets per side
};

class MaterialTable {
 public:
  MaterialTable() = default;

  /// Inserts or replaces by name. Throws E_BAD_VALUE on invariant violation.
  void put(Material m);

  const Material* find(std::string_view name) const;
  /// Throws E_UNKNOWN_MATERIAL.
  const Material& at(std::string_view name) const;

  std::size_t size() const { return entries_.size(); }
  /// Entries in name order.
  std::vector<const Material*> list() const;

 private:
  std::map<std::string, Material, std::less<>> entries_;
};

/// The eight fabrics characterised on the weld-and-cut platform.
MaterialTable builtin_table();

/// Slowest material governs the seam: min over the stack's feed rates.
/// Throws E_UNKNOWN_MATERIAL.
double feed_rate_for(const MaterialTable& table, std::span<const std::string> layers);

/// True when the stack mixes materials with different feed rates.
bool mixed_feed_stack(const MaterialTable& table, std::span<const std::string> layers);

/// Merges a user material file (one [section] per material) over `base`.
/// Keys: description, areal_weight_gsm, weight_class, coating,
/// weld_feed_mm_min, ptfe_layers. Omitted weld feed follows weight_class.
MaterialTable load_materials(std::string_view text, MaterialTable base);

}  // namespace pneufab
