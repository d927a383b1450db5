#include "quadsmc/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace quadsmc {

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void append_vec(std::ostringstream& os, const double* v, int n) {
  for (int i = 0; i < n; ++i) os << ',' << format_full(v[i]);
}

}  // namespace

std::string trace_csv_header() {
  std::ostringstream os;
  os << "t";
  const char* state_names[] = {"xi_x",  "xi_y",  "xi_z",  "nu_x", "nu_y",
                               "nu_z",  "q_w",   "q_x",   "q_y",  "q_z",
                               "omega_x", "omega_y", "omega_z"};
  for (const char* n : state_names) os << ',' << n;
  for (const char* n : state_names) os << ",ref_" << n;
  os << ",q_e_w,q_e_x,q_e_y,q_e_z";
  os << ",s_q_x,s_q_y,s_q_z,s_xi_x,s_xi_y,s_xi_z";
  os << ",f,tau_x,tau_y,tau_z";
  os << ",npwm_1,npwm_2,npwm_3,npwm_4";
  os << ",K_q_x,K_q_y,K_q_z,K_xi_x,K_xi_y,K_xi_z";
  os << ",V_q,V_xi,V_2,flags";
  return os.str();
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream os;
  os << trace_csv_header() << '\n';
  for (const TraceRow& r : rows) {
    os << format_full(r.t);
    append_vec(os, r.state.data(), 13);
    append_vec(os, r.reference.data(), 13);
    append_vec(os, r.q_e.data(), 4);
    append_vec(os, r.s_q.data(), 3);
    append_vec(os, r.s_xi.data(), 3);
    os << ',' << format_full(r.f);
    append_vec(os, r.tau.data(), 3);
    append_vec(os, r.npwm.data(), 4);
    append_vec(os, r.K_q.data(), 3);
    append_vec(os, r.K_xi.data(), 3);
    os << ',' << format_full(r.V_q) << ',' << format_full(r.V_xi) << ','
       << format_full(r.V_2) << ',' << r.flags << '\n';
  }
  return os.str();
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& rows) {
  write_text_file(path, trace_csv(rows));
}

std::string table_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::invalid_argument("table_csv: row width != header width");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_full(row[i]);
    }
    os << '\n';
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace quadsmc
