#ifndef MATMAP_COMPOSITION_HPP
#define MATMAP_COMPOSITION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace matmap {

/// One monitored material. Ids are dense 1..psi, names unique.
struct Material {
    std::int32_t id = 0;
    std::string name;

    friend bool operator==(const Material&, const Material&) = default;
};

/// One detectable object class. Ids are dense 1..q, names unique.
struct ObjectClass {
    std::int32_t id = 0;
    std::string name;

    friend bool operator==(const ObjectClass&, const ObjectClass&) = default;
};

/// Per-material masses in kg, aligned to the registry's material list
/// (entry j-1 is the mass of material id j).
using MassVector = std::vector<double>;

/// Maps each object class to its constituent-material mass vector over the
/// monitored material set. Built once, single-threaded, then treated as
/// immutable; concurrent reads are safe after construction.
///
/// A class may name fewer materials than the registry monitors; such
/// compositions are registered as (material, mass) pairs and padded with
/// 0 kg, keyed by material id so entries can never silently misalign.
/// Positional input is accepted only at full length psi.
class CompositionRegistry {
public:
    CompositionRegistry() = default;
    CompositionRegistry(std::vector<std::string> material_names,
                        std::vector<std::string> class_names);

    /// Positional registration; `masses` must have exactly psi entries.
    void register_class(std::int32_t class_id, const MassVector& masses);

    /// Sparse registration by material id; absent materials get 0 kg.
    void register_class(std::int32_t class_id,
                        const std::vector<std::pair<std::int32_t, double>>& entries);

    /// Mass m[c][j] in kg. Both ids must be registered.
    double class_mass(std::int32_t class_id, std::int32_t material_id) const;

    /// The aligned psi-length composition of a registered class.
    const MassVector& composition(std::int32_t class_id) const;

    bool class_registered(std::int32_t class_id) const;

    /// Throws unless every class has a composition.
    void check_complete() const;

    std::size_t material_count() const { return materials_.size(); }
    std::size_t class_count() const { return classes_.size(); }
    const std::vector<Material>& materials() const { return materials_; }
    const std::vector<ObjectClass>& classes() const { return classes_; }

    std::optional<std::int32_t> find_material(std::string_view name) const;
    std::optional<std::int32_t> find_class(std::string_view name) const;

    friend bool operator==(const CompositionRegistry&, const CompositionRegistry&) = default;

private:
    std::vector<Material> materials_;
    std::vector<ObjectClass> classes_;
    std::vector<MassVector> compositions_;   // indexed by class id - 1
    std::vector<bool> registered_;           // indexed by class id - 1
};

} // namespace matmap

#endif
