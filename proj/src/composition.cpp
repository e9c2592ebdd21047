#include "matmap/composition.hpp"

#include "matmap/error.hpp"

#include <cmath>
#include <unordered_set>

namespace matmap {

namespace {

void check_unique_names(const std::vector<std::string>& names, const char* what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& name : names) {
        if (name.empty()) throw_invalid(std::string(what) + " name must not be empty");
        if (!seen.insert(name).second) {
            throw_invalid("duplicate " + std::string(what) + " name \"" + name + "\"");
        }
    }
}

void check_mass(double kg, std::int32_t class_id) {
    if (!std::isfinite(kg)) {
        throw_invalid("class " + std::to_string(class_id) + ": mass must be finite");
    }
    if (kg < 0.0) {
        throw_invalid("class " + std::to_string(class_id) + ": mass must be >= 0 kg, got " +
                      std::to_string(kg));
    }
}

} // namespace

CompositionRegistry::CompositionRegistry(std::vector<std::string> material_names,
                                         std::vector<std::string> class_names) {
    check_unique_names(material_names, "material");
    check_unique_names(class_names, "class");
    materials_.reserve(material_names.size());
    for (std::size_t i = 0; i < material_names.size(); ++i) {
        materials_.push_back({static_cast<std::int32_t>(i + 1), std::move(material_names[i])});
    }
    classes_.reserve(class_names.size());
    for (std::size_t i = 0; i < class_names.size(); ++i) {
        classes_.push_back({static_cast<std::int32_t>(i + 1), std::move(class_names[i])});
    }
    compositions_.assign(classes_.size(), MassVector(materials_.size(), 0.0));
    registered_.assign(classes_.size(), false);
}

void CompositionRegistry::register_class(std::int32_t class_id, const MassVector& masses) {
    if (class_id < 1 || static_cast<std::size_t>(class_id) > classes_.size()) {
        throw_invalid("unknown class id " + std::to_string(class_id));
    }
    if (registered_[class_id - 1]) {
        throw_invalid("class " + std::to_string(class_id) + " already has a composition");
    }
    if (masses.size() != materials_.size()) {
        throw_invalid("class " + std::to_string(class_id) + ": positional composition must list all " +
                      std::to_string(materials_.size()) + " materials, got " +
                      std::to_string(masses.size()));
    }
    for (double kg : masses) check_mass(kg, class_id);
    compositions_[class_id - 1] = masses;
    registered_[class_id - 1] = true;
}

void CompositionRegistry::register_class(
    std::int32_t class_id, const std::vector<std::pair<std::int32_t, double>>& entries) {
    if (class_id < 1 || static_cast<std::size_t>(class_id) > classes_.size()) {
        throw_invalid("unknown class id " + std::to_string(class_id));
    }
    if (registered_[class_id - 1]) {
        throw_invalid("class " + std::to_string(class_id) + " already has a composition");
    }
    MassVector aligned(materials_.size(), 0.0);
    std::vector<bool> seen(materials_.size(), false);
    for (const auto& [material_id, kg] : entries) {
        if (material_id < 1 || static_cast<std::size_t>(material_id) > materials_.size()) {
            throw_invalid("class " + std::to_string(class_id) + ": unknown material id " +
                          std::to_string(material_id));
        }
        if (seen[material_id - 1]) {
            throw_invalid("class " + std::to_string(class_id) + ": material id " +
                          std::to_string(material_id) + " listed twice");
        }
        check_mass(kg, class_id);
        aligned[material_id - 1] = kg;
        seen[material_id - 1] = true;
    }
    compositions_[class_id - 1] = std::move(aligned);
    registered_[class_id - 1] = true;
}

double CompositionRegistry::class_mass(std::int32_t class_id, std::int32_t material_id) const {
    if (material_id < 1 || static_cast<std::size_t>(material_id) > materials_.size()) {
        throw_invalid("unknown material id " + std::to_string(material_id));
    }
    return composition(class_id)[material_id - 1];
}

const MassVector& CompositionRegistry::composition(std::int32_t class_id) const {
    if (class_id < 1 || static_cast<std::size_t>(class_id) > classes_.size() ||
        !registered_[class_id - 1]) {
        throw_invalid("class " + std::to_string(class_id) + " has no registered composition");
    }
    return compositions_[class_id - 1];
}

bool CompositionRegistry::class_registered(std::int32_t class_id) const {
    return class_id >= 1 && static_cast<std::size_t>(class_id) <= classes_.size() &&
           registered_[class_id - 1];
}

void CompositionRegistry::check_complete() const {
    for (const auto& cls : classes_) {
        if (!registered_[cls.id - 1]) {
            throw_invalid("class \"" + cls.name + "\" has no composition");
        }
    }
}

std::optional<std::int32_t> CompositionRegistry::find_material(std::string_view name) const {
    for (const auto& m : materials_) {
        if (m.name == name) return m.id;
    }
    return std::nullopt;
}

std::optional<std::int32_t> CompositionRegistry::find_class(std::string_view name) const {
    for (const auto& c : classes_) {
        if (c.name == name) return c.id;
    }
    return std::nullopt;
}

} // namespace matmap
