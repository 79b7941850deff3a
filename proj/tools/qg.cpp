// qg: symmetry reduction of quantum graphs from declarative JSON inputs.
//
// Subcommands: validate, quotient, spectrum, verify, examples.
// Exit codes: 0 success, 1 domain failure, 2 I/O or parse failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qg/io.hpp"
#include "qg/spectral.hpp"

namespace {

constexpr const char* kVersion = "qg 1.0.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qg::ParseError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Cosmetic rendering of well-known constants in human-readable tables;
// machine output stays numeric.
std::string pretty(double v) {
  const auto close = [&](double ref) { return std::abs(v - ref) < 1e-9; };
  for (int n = 1; n <= 40; ++n) {
    if (close(n * std::numbers::pi / 2.0)) {
      if (n == 2) return "pi";
      if (n % 2 == 0) return std::to_string(n / 2) + "*pi";
      return std::to_string(n) + "*pi/2";
    }
  }
  if (close(std::sqrt(3.0))) return "sqrt(3)";
  if (close(-std::sqrt(3.0))) return "-sqrt(3)";
  if (close(1.0 / 3.0)) return "1/3";
  if (close(-1.0 / 3.0)) return "-1/3";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string describe_boundary(const qg::BoundaryCondition& bc) {
  switch (bc.kind) {
    case qg::BoundaryKind::Neumann:
      return "Neumann";
    case qg::BoundaryKind::Dirichlet:
      return "Dirichlet";
    case qg::BoundaryKind::Robin: {
      std::string c = std::abs(bc.robin_coeff.imag()) < 1e-9
                          ? pretty(bc.robin_coeff.real())
                          : "(" + std::to_string(bc.robin_coeff.real()) + "+" +
                                std::to_string(bc.robin_coeff.imag()) + "i)";
      return "Robin, coefficient " + c;
    }
    case qg::BoundaryKind::Coupled:
      return "coupled";
  }
  return "?";
}

qg::Json quotient_block(const qg::QuotientGraph& q) {
  qg::Json blk;
  blk["label"] = q.irrep_label;
  blk["multiplicity"] = q.multiplicity;
  blk["edge_lengths"] = q.edge_lengths;
  blk["A_rho"] = qg::io_detail::matrix_to_json(q.coupling.A);
  blk["B_rho"] = qg::io_detail::matrix_to_json(q.coupling.B);
  return blk;
}

qg::Json spectrum_json(const qg::Spectrum& s) {
  qg::Json out;
  out["k_min"] = s.k_min;
  out["k_max"] = s.k_max;
  out["zero_multiplicity"] = s.zero_multiplicity;
  out["entries"] = qg::Json::array();
  for (const auto& en : s.entries)
    out["entries"].push_back({{"k", en.k}, {"multiplicity", en.multiplicity}});
  return out;
}

void print_quotient_table(const qg::QuotientSet& set) {
  for (const auto& q : set.quotients) {
    std::cout << "irrep " << q.irrep_label << ": " << q.edge_lengths.size()
              << " edge(s), multiplicity " << q.multiplicity;
    if (q.edge_lengths.size() == 1) {
      const auto [left, right] = qg::classify_segment_ends(q.coupling);
      std::cout << "  [segment: " << describe_boundary(left) << " / "
                << describe_boundary(right) << "]";
    }
    std::cout << "\n";
  }
  for (const auto& label : set.skipped)
    std::cout << "irrep " << label << ": empty quotient (skipped)\n";
}

int run_validate(const std::string& path) {
  const qg::Problem p = qg::load_problem(path);
  const qg::CouplingReport cr = qg::validate_coupling(p.graph.coupling);
  std::cout << "hermiticity (A B† = B A†): " << (cr.hermitian_ok ? "pass" : "FAIL")
            << " (residual " << cr.hermitian_residual << ")\n";
  std::cout << "maximal rank of (A B): " << (cr.rank_ok ? "pass" : "FAIL")
            << " (rank " << cr.rank << " of " << p.graph.coupling.size() << ")\n";
  bool sym_ok = false;
  if (cr.pass()) {
    const qg::SymmetryReport sr = qg::check_pi_symmetric(p.graph, p.action);
    sym_ok = sr.pass();
    std::cout << "pi-symmetry: " << (sym_ok ? "pass" : "FAIL");
    if (!sr.lengths_ok) std::cout << " (edge lengths not orbit-constant)";
    if (!sr.coupling_ok)
      std::cout << " (coupling breaks at group element " << sr.failing_element << ")";
    std::cout << "\n";
  } else {
    std::cout << "pi-symmetry: skipped (coupling invalid)\n";
  }
  return cr.pass() && sym_ok ? 0 : 1;
}

int run_quotient(const std::string& path, const std::string& output) {
  const std::string bytes = read_file(path);
  const qg::Problem p = qg::load_problem(path);
  const qg::QuotientSet set = qg::build_all_quotients(p.graph, p.action, p.irreps);
  print_quotient_table(set);
  if (!output.empty()) {
    qg::Json doc;
    doc["version"] = kVersion;
    doc["input_digest"] = qg::content_digest(bytes);
    doc["quotients"] = qg::Json::array();
    for (const auto& q : set.quotients) doc["quotients"].push_back(quotient_block(q));
    doc["skipped"] = set.skipped;
    std::ofstream out(output);
    if (!out) throw qg::ParseError("cannot write '" + output + "'");
    out << doc.dump(2) << "\n";
    std::cout << "wrote " << output << "\n";
  }
  return 0;
}

int run_spectrum(const std::string& path, bool quotients_side, const std::string& csv) {
  const qg::Problem p = qg::load_problem(path);
  qg::ScanOptions opts;
  opts.step = p.step;
  qg::Spectrum spec;
  std::vector<qg::ScanSample> samples;
  if (quotients_side) {
    const qg::QuotientSet set = qg::build_all_quotients(p.graph, p.action, p.irreps);
    spec = qg::direct_sum_spectrum(set.quotients, p.k_min, p.k_max, opts);
  } else {
    spec = qg::eigenvalues_in_window(p.graph, p.k_min, p.k_max, opts,
                                     csv.empty() ? nullptr : &samples);
  }
  if (spec.includes_zero_mode)
    std::cout << "zero mode: multiplicity " << spec.zero_multiplicity << "\n";
  std::printf("%-18s %s\n", "k", "multiplicity");
  for (const auto& en : spec.entries)
    std::printf("%-18.12g %d   (%s)\n", en.k, en.multiplicity, pretty(en.k).c_str());
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw qg::ParseError("cannot write '" + csv + "'");
    out << "k,absdet,sigma_min\n";
    for (const auto& s : samples) {
      char line[96];
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", s.k, s.absdet, s.sigma_min);
      out << line;
    }
    std::cout << "wrote " << csv << "\n";
  }
  return 0;
}

int run_verify(const std::string& path) {
  const qg::Problem p = qg::load_problem(path);
  qg::ScanOptions opts;
  opts.step = p.step;
  const qg::VerificationReport rep =
      qg::verify_theorem(p.graph, p.action, p.irreps, p.k_min, p.k_max, opts);
  print_quotient_table(rep.quotients);
  std::printf("%-18s %-18s %-14s %-10s %s\n", "k (full)", "k (quotients)", "irrep",
              "dk", "status");
  for (const auto& pr : rep.pairs) {
    const std::string kf = pr.k_full ? pretty(*pr.k_full) : "-";
    const std::string kq = pr.k_quotient ? pretty(*pr.k_quotient) : "-";
    std::string status = pr.ok ? "match" : "MISMATCH";
    if (pr.ok && pr.mult_full > 1)
      status += " x" + std::to_string(pr.mult_full);
    if (!pr.in_verdict) status += " (boundary, excluded)";
    if (!pr.ok && pr.k_full && pr.k_quotient && pr.mult_full != pr.mult_quotient)
      status += " (mult " + std::to_string(pr.mult_full) + " vs " +
                std::to_string(pr.mult_quotient) + ")";
    std::printf("%-18s %-18s %-14s %-10.2e %s\n", kf.c_str(), kq.c_str(),
                pr.irrep_label.c_str(), pr.dk, status.c_str());
  }
  std::cout << "verdict: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  return rep.pass ? 0 : 1;
}

int run_examples(const std::string& name, const std::string& dir) {
  const qg::Json doc = qg::example_problem(name);
  std::filesystem::path out_path = std::filesystem::path(dir) / (name + ".json");
  std::ofstream out(out_path);
  if (!out) throw qg::ParseError("cannot write '" + out_path.string() + "'");
  out << doc.dump(2) << "\n";
  std::cout << out_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry reduction and spectral verification of quantum graphs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string file, output, csv, dir = ".", name;
  bool side_quotients = false, side_full = false;

  CLI::App* validate = app.add_subcommand("validate", "Check coupling and symmetry");
  validate->add_option("file", file)->required();

  CLI::App* quotient = app.add_subcommand("quotient", "Build per-irrep quotient graphs");
  quotient->add_option("file", file)->required();
  quotient->add_option("--output", output, "Write a JSON result document");

  CLI::App* spectrum = app.add_subcommand("spectrum", "Eigenvalues in the scan window");
  spectrum->add_option("file", file)->required();
  spectrum->add_flag("--quotients", side_quotients, "Direct sum of quotient spectra");
  spectrum->add_flag("--full", side_full, "Full-graph spectrum (default)");
  spectrum->add_option("--csv", csv, "Write det-scan samples as CSV");

  CLI::App* verify = app.add_subcommand("verify", "Compare full and quotient spectra");
  verify->add_option("file", file)->required();

  CLI::App* examples = app.add_subcommand("examples", "Write a bundled example input");
  examples->add_option("name", name, "standard | delta | preferred")->required();
  examples->add_option("--write", dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(file);
    if (quotient->parsed()) return run_quotient(file, output);
    if (spectrum->parsed()) {
      if (side_quotients && side_full) {
        std::cerr << "error: --quotients and --full are mutually exclusive\n";
        return 2;
      }
      return run_spectrum(file, side_quotients, csv);
    }
    if (verify->parsed()) return run_verify(file);
    if (examples->parsed()) return run_examples(name, dir);
  } catch (const qg::ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const qg::UnknownExample& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const qg::WindowTooCoarse& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const qg::Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
