#include "cellsmith/arch.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "cellsmith/config.hpp"

namespace cellsmith {

int Architecture::usable_strap_tracks() const {
    int t = static_cast<int>(std::floor(m1_signal_tracks)) - 2;
    return t < 1 ? 1 : t;
}

Architecture builtin_architecture(const std::string& name) {
    Architecture a;
    a.name = name;
    if (name == "9T") {
        a.track_count = 9;
        a.total_fins = 12;
        a.fins_per_transistor = 4;
        a.m1_signal_tracks = 8;
        a.m2_signal_tracks = 8;
        a.m1_m2_offset_nm = 0;
        return a;
    }
    if (name == "7.5T") {
        a.track_count = 7.5;
        a.total_fins = 10;
        a.fins_per_transistor = 3;
        a.m1_signal_tracks = 5.5;
        a.m2_signal_tracks = 6;
        a.m1_m2_offset_nm = 9;
        return a;
    }
    throw std::invalid_argument("unknown architecture: " + name);
}

void validate_architecture(const Architecture& arch) {
    auto bad = [&](const std::string& what) {
        throw std::invalid_argument("architecture " + arch.name + ": " + what);
    };
    if (arch.track_count <= 0) bad("track_count must be positive");
    if (arch.fin_pitch_nm <= 0 || arch.m1_pitch_nm <= 0 || arch.m2_pitch_nm <= 0 ||
        arch.poly_pitch_nm <= 0)
        bad("pitches must be positive");
    if (arch.total_fins <= 0) bad("total_fins must be positive");
    if (arch.fins_per_transistor < 1) bad("fins_per_transistor must be at least 1");
    // two device rows plus two reserved fins per rail side must fit in the cell
    if (2 * arch.fins_per_transistor > arch.total_fins - 4)
        bad("fins_per_transistor exceeds (total_fins - 4) / 2");
    if (arch.m1_signal_tracks <= 0) bad("m1_signal_tracks must be positive");
    if (arch.m2_signal_tracks <= 0) bad("m2_signal_tracks must be positive");
    if (arch.m1_m2_offset_nm < 0) bad("m1_m2_offset_nm must not be negative");
}

Architecture load_architecture(const std::string& name_or_path) {
    if (name_or_path == "9T" || name_or_path == "7.5T") {
        Architecture a = builtin_architecture(name_or_path);
        validate_architecture(a);
        return a;
    }
    if (!std::filesystem::exists(name_or_path))
        throw std::invalid_argument("unknown architecture: " + name_or_path);

    Architecture a = builtin_architecture("9T");
    a.name = std::filesystem::path(name_or_path).stem().string();
    for (const auto& [key, value] : read_kv_file(name_or_path)) {
        auto num = [&]() {
            try {
                std::size_t used = 0;
                double v = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                return v;
            } catch (const std::exception&) {
                throw std::invalid_argument("architecture " + name_or_path + ": bad value for " +
                                            key + ": " + value);
            }
        };
        if (key == "name")
            a.name = value;
        else if (key == "track_count")
            a.track_count = num();
        else if (key == "fin_pitch_nm")
            a.fin_pitch_nm = num();
        else if (key == "m1_pitch_nm")
            a.m1_pitch_nm = num();
        else if (key == "m2_pitch_nm")
            a.m2_pitch_nm = num();
        else if (key == "total_fins")
            a.total_fins = static_cast<int>(num());
        else if (key == "fins_per_transistor")
            a.fins_per_transistor = static_cast<int>(num());
        else if (key == "m1_signal_tracks")
            a.m1_signal_tracks = num();
        else if (key == "m2_signal_tracks")
            a.m2_signal_tracks = static_cast<int>(num());
        else if (key == "m1_m2_offset_nm")
            a.m1_m2_offset_nm = num();
        else if (key == "poly_pitch_nm")
            a.poly_pitch_nm = num();
        else
            throw std::invalid_argument("unknown architecture key: " + key);
    }
    validate_architecture(a);
    return a;
}

Fo4Result fo4_evaluate(const CellNetlist& sized, const Architecture& arch,
                       const DelayModel& model) {
    for (const Transistor& t : sized.transistors) {
        if (t.fins > arch.fins_per_transistor)
            throw std::invalid_argument(sized.name + ": transistor " + t.name + " has " +
                                        std::to_string(t.fins) + " fins, architecture " +
                                        arch.name + " allows " +
                                        std::to_string(arch.fins_per_transistor));
        if (t.fins < 1)
            throw std::invalid_argument(sized.name + ": transistor " + t.name +
                                        " has fewer than 1 fin");
    }
    if (sized.inputs.empty()) throw std::invalid_argument(sized.name + ": no input pins");
    Fo4Result r;
    r.cin = input_pin_cap(sized, sized.inputs.front(), model);
    r.load = 4 * r.cin;
    NetlistEval eval = evaluate_netlist(sized, model, r.load);
    if (!eval.evaluable) throw std::runtime_error(sized.name + ": " + eval.note);
    r.delay = (eval.rise_delay + eval.fall_delay) / 2;
    r.power_proxy = (eval.rise_cap + eval.fall_cap) / 2;
    return r;
}

}
