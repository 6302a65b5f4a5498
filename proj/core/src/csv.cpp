#include "egd/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "egd/errors.hpp"

namespace egd {

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    return out;
}

}  // namespace

std::string csv_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_density_csv(const std::string& path, const SimResult& result) {
    std::ofstream out = open_csv(path);
    bool is_2d = !result.samples.empty() &&
                 result.samples.front().density.grid().is_2d();
    out << (is_2d ? "t,x,z,pdf\n" : "t,x,pdf\n");
    for (const SampleRecord& sample : result.samples) {
        const Grid& grid = sample.density.grid();
        std::string t = csv_double(sample.t);
        for (int flat = 0; flat < grid.cell_count(); ++flat) {
            out << t << ',' << csv_double(grid.center_x(flat));
            if (is_2d) out << ',' << csv_double(grid.center_z(flat));
            out << ',' << csv_double(sample.density.pdf(flat)) << '\n';
        }
    }
}

void write_eta_csv(const std::string& path, const SimResult& result,
                   bool pairwise, const HjbParams& params) {
    std::ofstream out = open_csv(path);
    out << (pairwise ? "t,eta,E\n" : "t,eta\n");
    for (const auto& [t, eta] : result.eta_history) {
        out << csv_double(t) << ',' << csv_double(eta);
        if (pairwise) {
            out << ','
                << csv_double(true_exploration_cost(eta, params.chi, params.xi,
                                                    params.epsilon));
        }
        out << '\n';
    }
}

void write_summary_csv(const std::string& path, const SimResult& result) {
    std::ofstream out = open_csv(path);
    out << "mean_action,steps,stationary,nash_gap,eta\n";
    const SampleRecord& last = result.samples.back();
    out << csv_double(last.mean) << ',' << result.steps_taken << ','
        << (result.stationary ? 1 : 0) << ',' << csv_double(last.nash_gap_value)
        << ',' << csv_double(result.final_eta()) << '\n';
}

void write_table1_csv(const std::string& path,
                      const std::vector<RateTableRow>& rows) {
    std::ofstream out = open_csv(path);
    out << "I,epsilon,average,error,rate\n";
    for (const RateTableRow& row : rows) {
        out << row.level << ',' << csv_double(row.epsilon) << ','
            << csv_double(row.mean) << ',' << csv_double(row.error) << ',';
        if (row.rate) out << csv_double(*row.rate);
        out << '\n';
    }
}

}  // namespace egd
