#include "pwc/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <functional>
#include <optional>
#include <sstream>

#include "pwc/criterion.hpp"
#include "pwc/errors.hpp"
#include "pwc/exactgeom.hpp"
#include "pwc/io.hpp"
#include "pwc/kernels.hpp"
#include "pwc/spectral.hpp"
#include "pwc/torus.hpp"
#include "pwc/witness.hpp"

#ifndef PWC_VERSION
#define PWC_VERSION "dev"
#endif

namespace pwc::cli {

namespace {

using io::json;

// Ratios above 1 + kRatioSlack count as a detected norm increase.
constexpr double kRatioSlack = 1e-9;

struct Inputs {
  BoxUnion s1;
  BoxUnion s2;
};

Inputs load(const Options& o) { return {io::read_setspec_file(o.s1_file), io::read_setspec_file(o.s2_file)}; }

json report_head(const std::string& command, json inputs) {
  json r;
  r["tool"] = "pwcontract";
  r["version"] = PWC_VERSION;
  r["command"] = command;
  r["inputs_digest"] = io::fnv1a_hex(inputs.dump());
  r["inputs"] = std::move(inputs);
  return r;
}

json base_inputs(const Inputs& in) { return {{"s1", io::setspec_json(in.s1)}, {"s2", io::setspec_json(in.s2)}}; }

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + o.out);
  f << text;
}

void emit(const Options& o, const json& report) { emit(o, report.dump(2) + "\n"); }

int verdict_exit(Verdict v) { return v == Verdict::Contractive ? kContractive : kNotContractive; }

// Maps the library's exceptions onto the exit-status contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const OverlapError& e) {
    err << "hypothesis violated: " << e.what() << '\n';
    return kHypothesis;
  } catch (const DimensionMismatch& e) {
    err << "hypothesis violated: " << e.what() << '\n';
    return kHypothesis;
  } catch (const InconclusiveSupport& e) {
    err << "inconclusive: " << e.what() << " (window [" << e.window_lo << ", " << e.window_hi
        << "]; try a larger --grid-M)\n";
    return kNumerical;
  } catch (const CertificationFailure& e) {
    err << "certification failed: " << e.what() << '\n';
    return kNumerical;
  } catch (const MissingDecayBound& e) {
    err << "certification failed: " << e.what() << '\n';
    return kNumerical;
  } catch (const io::SetSpecError& e) {
    err << "bad set document: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

void apply_threads(const Options& o) {
  if (o.threads > 0) kernels::set_threads(o.threads);
}

Rational parse_period(const std::string& text) {
  const auto l = Rational::try_parse(text);
  if (!l || l->sign() <= 0) throw std::invalid_argument("--lattice-L must be a positive rational, got " + text);
  return *l;
}

}  // namespace

int cmd_decide(const Options& o, std::ostream& err) {
  return guarded(err, [&] {
    const Inputs in = load(o);
    const ExponentSpec p = ExponentSpec::parse(o.p);
    const Certificate cert = decide(in.s1, in.s2, p);
    json inputs = base_inputs(in);
    inputs["p"] = p.to_string();
    json r = report_head("decide", std::move(inputs));
    r["certificate"] = io::to_json(cert);
    emit(o, r);
    return verdict_exit(cert.verdict);
  });
}

int cmd_verify(const Options& o, std::ostream& err) {
  return guarded(err, [&] {
    apply_threads(o);
    const Inputs in = load(o);
    if (in.s1.dim() != 1 || in.s2.dim() != 1) throw PreconditionError("verify works with one-dimensional sets only");
    check_hypotheses(in.s1, in.s2);
    const ExponentSpec p = ExponentSpec::parse(o.p);
    if (p.is_infinite()) throw std::invalid_argument("verify needs a finite exponent; use witness for p = inf");
    if (!p.is_even()) err << "warning: p = " << p.to_string() << " is not even; lattice norms are sampled, not exact\n";
    const Rational period = parse_period(o.lattice_L);
    const Certificate cert = decide(in.s1, in.s2, p);
    const torus::LatticeModel model(in.s1, in.s2, period);

    json inputs = base_inputs(in);
    inputs["p"] = p.to_string();
    inputs["trials"] = o.trials;
    inputs["seed"] = o.seed;
    inputs["lattice_L"] = period.to_string();
    inputs["iterations"] = o.iterations;
    inputs["restarts"] = o.restarts;
    json r = report_head("verify", std::move(inputs));
    r["certificate"] = io::to_json(cert);
    r["model"] = {{"label", "discrete model"},
                  {"period", period.to_string()},
                  {"s1_points", model.s1_indices().size()},
                  {"s2_points", model.s2_indices().size()},
                  {"exact_norms", p.is_even()}};

    if (model.s1_indices().empty()) {
      r["status"] = "INCONCLUSIVE";
      r["reason"] = "S1 contains no lattice points; increase --lattice-L";
      emit(o, r);
      err << "inconclusive: S1 contains no lattice points at L = " << period.to_string() << '\n';
      return static_cast<int>(kNumerical);
    }

    const double pv = p.to_double();
    const torus::TrialReport trials = torus::contraction_trial_p(model, pv, o.trials, o.seed);
    r["trials"] = {{"count", trials.trials}, {"max_ratio", trials.max_ratio}, {"argmax_trial", trials.argmax_trial}};
    double best = trials.max_ratio;
    std::optional<torus::LatticeSpectrum> best_spectrum;
    if (trials.trials > 0) best_spectrum = trials.argmax;

    if (!model.s2_indices().empty()) {
      torus::AscentOptions opts;
      opts.iterations = o.iterations;
      opts.restarts = o.restarts;
      const torus::AscentResult asc = torus::ratio_maximize_p(model, pv, o.seed, opts);
      r["ascent"] = {{"ratio", asc.ratio}, {"best_restart", asc.best_restart}, {"iterations", asc.best_so_far.size()}};
      if (asc.ratio > best) {
        best = asc.ratio;
        best_spectrum = asc.spectrum;
      }
    } else {
      r["ascent"] = nullptr;
    }
    r["best_ratio"] = best;

    std::string status;
    if (cert.verdict == Verdict::Contractive) {
      status = best <= 1.0 + kRatioSlack ? "CONSISTENT" : "INCONSISTENT";
    } else if (model.s2_indices().empty()) {
      status = "INCONCLUSIVE";
      r["reason"] = "S2 interior contains no lattice points; increase --lattice-L";
    } else {
      status = best > 1.0 + kRatioSlack ? "CONSISTENT" : "INCONSISTENT";
    }
    r["status"] = status;
    if (cert.verdict == Verdict::NotContractive && best_spectrum && best > 1.0) {
      r["witness_spectrum"] = io::to_json(*best_spectrum);
    }
    emit(o, r);
    if (status != "CONSISTENT") {
      err << status << ": lattice model best ratio " << best << " vs verdict " << to_string(cert.verdict) << '\n';
      return static_cast<int>(kNumerical);
    }
    return verdict_exit(cert.verdict);
  });
}

int cmd_witness(const Options& o, std::ostream& err) {
  return guarded(err, [&] {
    apply_threads(o);
    const Inputs in = load(o);
    const ExponentSpec p = ExponentSpec::parse(o.p);
    const Grid grid = Grid::make(o.grid_T, o.grid_M);
    json inputs = base_inputs(in);
    inputs["p"] = p.to_string();
    inputs["grid"] = io::to_json(grid);
    json r = report_head("witness", std::move(inputs));
    const Certificate cert = decide(in.s1, in.s2, p);
    r["certificate"] = io::to_json(cert);
    if (cert.verdict == Verdict::Contractive) {
      r["witness"] = nullptr;
      r["message"] = "contractive: no witness exists";
      emit(o, r);
      err << "contractive: no witness exists for p = " << p.to_string() << '\n';
      return static_cast<int>(kContractive);
    }
    if (in.s1.dim() != 1 || in.s2.dim() != 1) throw PreconditionError("witness constructions need one-dimensional sets");
    try {
      const Witness w = make_witness(in.s1, in.s2, p, grid);
      r["witness"] = io::to_json(w);
      emit(o, r);
      return static_cast<int>(kNotContractive);
    } catch (const InconclusiveSupport& e) {
      r["witness"] = nullptr;
      r["inconclusive"] = {{"reason", e.what()}, {"window", {e.window_lo, e.window_hi}}, {"hint", "increase --grid-M"}};
      emit(o, r);
      throw;
    } catch (const CertificationFailure& e) {
      r["witness"] = nullptr;
      r["inconclusive"] = {{"reason", e.what()}, {"hint", "increase --grid-M or --grid-T"}};
      emit(o, r);
      throw;
    }
  });
}

int cmd_sweep(const Options& o, std::ostream& err) {
  return guarded(err, [&] {
    if (o.k_max < 1) throw std::invalid_argument("--k-max must be at least 1");
    const Inputs in = load(o);
    check_hypotheses(in.s1, in.s2);
    std::vector<io::SweepRow> rows;
    DifferenceSumSequence seq(in.s1);
    for (unsigned k = 1; k <= o.k_max; ++k) {
      if (k > 1) seq.advance();
      const Rational ob = intersection_measure(seq.current(), in.s2);
      rows.push_back({k, ob, ob.sign() > 0 ? Verdict::NotContractive : Verdict::Contractive});
    }
    std::ostringstream csv;
    io::write_sweep_csv(csv, rows);
    emit(o, csv.str());
    return static_cast<int>(kContractive);
  });
}

}  // namespace pwc::cli
