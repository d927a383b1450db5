#pragma once

#include <string>
#include <vector>

#include "quadsmc/sim.hpp"

namespace quadsmc {

/// Shortest round-trippable decimal form (17 significant digits).
std::string format_full(double x);

/// Trace CSV with the fixed column order:
/// t, state(13), reference(13), q_e(4), s_q(3), s_xi(3), f, tau(3),
/// npwm(4), K_q(3), K_xi(3), V_q, V_xi, V_2, flags.
std::string trace_csv_header();
std::string trace_csv(const std::vector<TraceRow>& rows);
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);

/// Generic numeric table; every cell printed with format_full.
std::string table_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace quadsmc
