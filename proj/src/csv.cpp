#include "sqz/csv.hpp"

#include <cstdio>
#include <fstream>

#include "sqz/errors.hpp"

namespace sqz {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw io_error("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw io_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw io_error("rename failed: " + tmp + " -> " + path);
}

}  // namespace

void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          bool stroke_column) {
    std::string out =
        "t,omega,L,n_mean,re_a2,im_a2,energy,pressure,w_alicki,w_alicki_zp,"
        "delta_w,w_expansion";
    if (stroke_column) out += ",stroke";
    out += "\n";
    for (const auto& s : ts) {
        out += fmt17(s.t) + "," + fmt17(s.omega) + "," + fmt17(s.length) + "," +
               fmt17(s.n) + "," + fmt17(s.s.real()) + "," + fmt17(s.s.imag()) +
               "," + fmt17(s.energy) + "," + fmt17(s.pressure) + "," +
               fmt17(s.w_alicki) + "," + fmt17(s.w_alicki_zp) + "," +
               fmt17(s.delta_w) + "," + fmt17(s.w_expansion);
        if (stroke_column) out += "," + std::to_string(s.stroke);
        out += "\n";
    }
    atomic_write(path, out);
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepCell>& cells) {
    std::string out = "r2,nbar,w_expansion_net,cycles_run,limit_cycle_reached\n";
    for (const auto& c : cells) {
        if (!c.error.empty())
            throw convergence_error("sweep cell (r2=" + fmt17(c.r2) +
                                    ", nbar=" + fmt17(c.nbar) +
                                    ") failed: " + c.error);
        out += fmt17(c.r2) + "," + fmt17(c.nbar) + "," +
               fmt17(c.w_expansion_net) + "," + std::to_string(c.cycles_run) +
               "," + (c.limit_cycle_reached ? "1" : "0") + "\n";
    }
    atomic_write(path, out);
}

void write_nstar_csv(const std::string& path, double r2,
                     const NbarStarResult& res) {
    std::string out = "r2,nbar_star,w_expansion,edge,evaluations\n";
    out += fmt17(r2) + "," + fmt17(res.nbar_star) + "," +
           fmt17(res.w_expansion) + "," + (res.edge ? "1" : "0") + "," +
           std::to_string(res.evaluations) + "\n";
    atomic_write(path, out);
}

void write_sidecar(const std::string& path, const nlohmann::json& resolved) {
    atomic_write(path, resolved.dump(2) + "\n");
}

}  // namespace sqz
