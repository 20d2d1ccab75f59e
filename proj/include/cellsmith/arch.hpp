#pragma once

#include <string>

#include "cellsmith/netlist.hpp"
#include "cellsmith/sizing.hpp"

namespace cellsmith {

struct Architecture {
    std::string name;
    double track_count = 0;
    double fin_pitch_nm = 27;
    double m1_pitch_nm = 36;
    double m2_pitch_nm = 36;
    int total_fins = 0;
    int fins_per_transistor = 0;
    double m1_signal_tracks = 0;
    int m2_signal_tracks = 0;
    double m1_m2_offset_nm = 0;
    double poly_pitch_nm = 54;

    double cell_height_nm() const { return track_count * m2_pitch_nm; }
    int usable_strap_tracks() const;
};

Architecture load_architecture(const std::string& name_or_path);
Architecture builtin_architecture(const std::string& name);
void validate_architecture(const Architecture& arch);

struct Fo4Result {
    double delay = 0;
    double power_proxy = 0;
    double cin = 0;
    double load = 0;
};

Fo4Result fo4_evaluate(const CellNetlist& sized, const Architecture& arch, const DelayModel& model);

}
