#include "gravent/constants.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gravent {

PhysicalConstants load_constants_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open constants file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("bad constants file " + path + ": " + e.what());
    }
    PhysicalConstants k;
    if (doc.contains("G")) k.G = doc.at("G").get<double>();
    if (doc.contains("hbar")) k.hbar = doc.at("hbar").get<double>();
    if (doc.contains("k_B")) k.k_B = doc.at("k_B").get<double>();
    if (doc.contains("c")) k.c = doc.at("c").get<double>();
    if (k.G <= 0 || k.hbar <= 0 || k.k_B <= 0 || k.c <= 0) {
        throw std::runtime_error("constants file " + path + ": all constants must be positive");
    }
    return k;
}

const PhysicalConstants& constants() {
    static const PhysicalConstants table = [] {
        if (const char* path = std::getenv("GRAVENT_CONSTANTS")) {
            return load_constants_file(path);
        }
        return PhysicalConstants{};
    }();
    return table;
}

}  // namespace gravent
