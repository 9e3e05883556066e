#include "commands.hpp"

#include <Eigen/Eigenvalues>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "nuq/dataset.hpp"
#include "nuq/dense.hpp"
#include "nuq/dynamics.hpp"
#include "nuq/io.hpp"
#include "nuq/mlp.hpp"
#include "nuq/models.hpp"
#include "nuq/pauli.hpp"
#include "nuq/vqe.hpp"

namespace nuq::cli {

namespace fs = std::filesystem;

fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  const char* base = std::getenv("NUQ_OUTPUT_DIR");
  if (base != nullptr && *base != '\0' && p.is_relative()) {
    return fs::path(base) / p;
  }
  return p;
}

void write_output_file(const fs::path& path, const std::string& content,
                       bool force) {
  if (fs::exists(path) && !force) {
    throw std::runtime_error("output exists (use --force to overwrite): " +
                             path.string());
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path partial = path.string() + ".partial";
  write_text_file(partial, content);
  fs::rename(partial, path);
}

void write_manifest(const fs::path& primary_output, const std::string& command,
                    const std::map<std::string, std::string>& config,
                    std::uint64_t seed,
                    const std::map<std::string, std::string>& digests,
                    const std::string& started_at) {
  RunManifest m;
  m.command = command;
  m.config = config;
  m.seed = seed;
  m.code_version = kCodeVersion;
  m.started_at = started_at;
  m.finished_at = current_timestamp();
  m.output_digests = digests;
  write_text_file(primary_output.string() + ".manifest", m.to_text());
}

namespace {

std::pair<int, int> parse_site_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("--pair expects 'i,j' (1-based sites)");
  }
  const int i = std::stoi(text.substr(0, comma));
  const int j = std::stoi(text.substr(comma + 1));
  if (i < 1 || j < 1 || i == j) {
    throw std::invalid_argument("--pair sites must be distinct and >= 1");
  }
  return {i - 1, j - 1};
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

int cmd_evolve(const EvolveArgs& args) {
  const std::string started = current_timestamp();
  const EvolutionMode mode = EvolutionMode::parse(args.mode);
  const auto pair = parse_site_pair(args.pair);
  const auto times = make_time_grid(args.samples, args.horizon);

  PauliSum h(1);
  std::vector<PauliSum> groups;
  std::map<std::string, std::string> config{
      {"model", args.model},
      {"mode", mode.to_string()},
      {"samples", std::to_string(args.samples)},
      {"horizon", fmt(args.horizon)},
      {"pair", args.pair}};

  if (args.model == "agassi") {
    const AgassiParams p{args.epsilon, args.chi, args.sigma, args.lambda,
                         args.j};
    p.validate();
    const auto group_arr = agassi_hamiltonian_groups(p);
    groups.assign(group_arr.begin(), group_arr.end());
    h = build_agassi(p);
    config["epsilon"] = fmt(p.epsilon);
    config["chi"] = fmt(p.chi);
    config["sigma"] = fmt(p.sigma);
    config["lambda"] = fmt(p.lambda);
    config["j"] = std::to_string(p.j);
  } else if (args.model == "annni") {
    const AnnniParams p{args.n_sites, args.kappa, args.h_field};
    h = build_annni(p);
    // disjoint term groups: nearest-neighbour X, next-nearest X, fields
    PauliSum gx(p.n_sites), gxx(p.n_sites), gz(p.n_sites);
    for (int i = 0; i < p.n_sites; ++i) {
      gx.add(multiply(PauliString::single(p.n_sites, i, 'X'),
                      PauliString::single(p.n_sites, (i + 1) % p.n_sites, 'X')),
             1.0);
      gxx.add(
          multiply(PauliString::single(p.n_sites, i, 'X'),
                   PauliString::single(p.n_sites, (i + 2) % p.n_sites, 'X')),
          -p.kappa);
      gz.add(PauliString::single(p.n_sites, i, 'Z'), p.h_field);
    }
    groups = {gx, gxx, gz};
    config["n_sites"] = std::to_string(p.n_sites);
    config["kappa"] = fmt(p.kappa);
    config["h_field"] = fmt(p.h_field);
  } else {
    throw std::invalid_argument("--model must be agassi or annni");
  }

  const StateVector psi0 = probe_state(h.n_sites());
  const CorrelationSeries series = correlation_series(
      h, psi0, pair, times, mode,
      mode.kind == EvolutionMode::kTrotter ? &groups : nullptr);

  const fs::path out = resolve_output(args.out.output);
  write_output_file(out, series_to_csv(series), args.out.force);
  std::map<std::string, std::string> digests{
      {out.filename().string(), file_digest(out)}};

  if (!args.dump_hamiltonian.empty()) {
    const fs::path hout = resolve_output(args.dump_hamiltonian);
    write_output_file(hout, serialize(h), args.out.force);
    digests[hout.filename().string()] = file_digest(hout);
  }
  write_manifest(out, "evolve", config, 0, digests, started);
  std::cout << "wrote " << out.string() << " (" << series.values.size()
            << " samples, mode " << mode.to_string() << ")\n";
  return kExitOk;
}

int cmd_dataset(const DatasetArgs& args) {
  const std::string started = current_timestamp();
  const EvolutionMode mode = EvolutionMode::parse(args.mode);

  std::vector<AgassiParams> lattice;
  if (!args.points_file.empty()) {
    lattice =
        parse_points_csv(read_text_file(resolve_output(args.points_file)));
    for (const auto& p : lattice) {
      if (p.j != args.j || p.epsilon != args.epsilon) {
        throw std::runtime_error("points manifest must match --j and --epsilon");
      }
    }
  } else {
    lattice = generate_lattice({{{args.range_lo, args.range_hi},
                                 {args.range_lo, args.range_hi},
                                 {args.range_lo, args.range_hi}}},
                               args.points_per_axis, args.epsilon, args.j);
  }

  const AgassiEngine engine(args.j, args.epsilon);
  PhaseCuts cuts;
  if (args.d_cut >= 0.0 && args.pg_cut >= 0.0 && args.ph_cut >= 0.0) {
    cuts = {args.d_cut, args.pg_cut, args.ph_cut};
    std::cerr << "using provided phase cuts\n";
  } else {
    std::cerr << "calibrating phase cuts on the six reference lines...\n";
    cuts = calibrate_phase_cuts(engine, args.calibration_points);
  }
  std::cerr << "cuts: deformation=" << fmt(cuts.deformation)
            << " pairing_like=" << fmt(cuts.pairing_like)
            << " pairing_cross=" << fmt(cuts.pairing_cross) << "\n";

  DatasetOptions opt;
  opt.mode = mode;
  opt.n_samples = args.samples;
  opt.horizon = args.horizon;
  opt.jobs = args.jobs > 0
                 ? args.jobs
                 : static_cast<int>(std::thread::hardware_concurrency());
  const auto samples = build_dataset(
      lattice, engine, cuts, opt, [](std::size_t done, std::size_t total) {
        std::cerr << "  " << done << "/" << total << " points\n";
      });

  std::array<int, 4> counts{0, 0, 0, 0};
  for (const auto& s : samples) counts[static_cast<int>(s.label)] += 1;
  std::cerr << "label marginals: symmetric=" << counts[0] << " hf=" << counts[1]
            << " bcs=" << counts[2] << " combined=" << counts[3] << "\n";

  const fs::path out = resolve_output(args.out.output);
  write_output_file(out, dataset_to_csv(samples), args.out.force);

  std::map<std::string, std::string> config{
      {"mode", mode.to_string()},
      {"points", std::to_string(lattice.size())},
      {"samples", std::to_string(args.samples)},
      {"horizon", fmt(args.horizon)},
      {"epsilon", fmt(args.epsilon)},
      {"j", std::to_string(args.j)},
      {"cut.deformation", fmt(cuts.deformation)},
      {"cut.pairing_like", fmt(cuts.pairing_like)},
      {"cut.pairing_cross", fmt(cuts.pairing_cross)},
      {"marginal.symmetric", std::to_string(counts[0])},
      {"marginal.hf", std::to_string(counts[1])},
      {"marginal.bcs", std::to_string(counts[2])},
      {"marginal.combined", std::to_string(counts[3])}};
  write_manifest(out, "dataset", config, 0,
                 {{out.filename().string(), file_digest(out)}}, started);
  std::cout << "wrote " << out.string() << " (" << samples.size() << " rows)\n";
  return kExitOk;
}

int cmd_train(const TrainArgs& args) {
  const std::string started = current_timestamp();
  const ParsedDataset parsed =
      parse_dataset_csv(read_text_file(resolve_output(args.data)));

  TrainConfig cfg;
  cfg.seed = args.seed;
  cfg.learning_rate = args.learning_rate;
  cfg.momentum = args.momentum;
  cfg.batch_size = args.batch_size;
  cfg.epochs = args.epochs;
  cfg.split_fraction = args.split_fraction;

  const TrainResult result = train_mlp(parsed.data, cfg);

  const fs::path model_out = resolve_output(args.model_out);
  write_output_file(model_out, save_mlp(result.model, cfg), args.force);
  std::map<std::string, std::string> digests{
      {model_out.filename().string(), file_digest(model_out)}};

  if (!args.log_out.empty()) {
    std::ostringstream log;
    log << "epoch,train_loss,test_acc\n";
    for (const auto& e : result.log) {
      log << e.epoch << ',' << fmt(e.train_loss) << ',' << fmt(e.test_accuracy)
          << "\n";
    }
    const fs::path log_out = resolve_output(args.log_out);
    write_output_file(log_out, log.str(), args.force);
    digests[log_out.filename().string()] = file_digest(log_out);
  }

  write_manifest(model_out, "train",
                 {{"data", args.data},
                  {"learning_rate", fmt(cfg.learning_rate)},
                  {"momentum", fmt(cfg.momentum)},
                  {"batch_size", std::to_string(cfg.batch_size)},
                  {"epochs", std::to_string(cfg.epochs)},
                  {"split_fraction", fmt(cfg.split_fraction)},
                  {"best_epoch", std::to_string(result.best_epoch)},
                  {"best_test_accuracy", fmt(result.best_test_accuracy)}},
                 cfg.seed, digests, started);
  std::cout << "best held-out accuracy " << fmt(result.best_test_accuracy)
            << " at epoch " << result.best_epoch << "\n";
  return kExitOk;
}

int cmd_eval(const EvalArgs& args) {
  const ParsedDataset parsed =
      parse_dataset_csv(read_text_file(resolve_output(args.data)));
  TrainConfig cfg;
  const MlpModel model =
      load_mlp(read_text_file(resolve_output(args.model)), &cfg);

  std::vector<int> indices;
  if (args.split == "all") {
    for (int k = 0; k < parsed.data.size(); ++k) indices.push_back(k);
  } else if (args.split == "train" || args.split == "test") {
    const SplitIndices split =
        split_dataset(parsed.data.size(), cfg.split_fraction, cfg.seed);
    indices = (args.split == "train") ? split.train : split.test;
  } else {
    throw std::invalid_argument("--split must be test, train or all");
  }
  if (indices.empty()) throw std::runtime_error("eval: empty split");

  Eigen::Matrix4i confusion = Eigen::Matrix4i::Zero();
  for (int k : indices) {
    const int predicted =
        model.predict_label(parsed.data.inputs.row(k).transpose());
    confusion(parsed.data.labels[k], predicted) += 1;
  }
  const int total = static_cast<int>(indices.size());
  const int correct = confusion.diagonal().sum();

  std::cout << "samples: " << total << " (" << args.split << " split)\n";
  std::cout << "overall accuracy: "
            << fmt(static_cast<double>(correct) / total) << "\n";
  const char* names[4] = {"symmetric", "hf", "bcs", "combined"};
  for (int c = 0; c < 4; ++c) {
    const int row_total = confusion.row(c).sum();
    std::cout << "class " << names[c] << ": n=" << row_total << " acc=";
    if (row_total > 0) {
      std::cout << fmt(static_cast<double>(confusion(c, c)) / row_total);
    } else {
      std::cout << "n/a";
    }
    std::cout << "\n";
  }
  std::cout << "confusion matrix (rows true, cols predicted):\n";
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      std::cout << confusion(r, c) << (c == 3 ? "\n" : " ");
    }
  }
  return kExitOk;
}

int cmd_scan(const ScanArgs& args) {
  const std::string started = current_timestamp();
  const EvolutionMode mode = EvolutionMode::parse(args.mode);
  TrainConfig cfg;
  const MlpModel model =
      load_mlp(read_text_file(resolve_output(args.model)), &cfg);

  int axis = -1;
  if (args.axis == "chi") axis = 0;
  else if (args.axis == "sigma") axis = 1;
  else if (args.axis == "lambda") axis = 2;
  else throw std::invalid_argument("--axis must be chi, sigma or lambda");

  const auto comma = args.fixed.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("--fixed expects 'a,b'");
  }
  if (args.points < 2) throw std::invalid_argument("--points must be >= 2");
  const ScanLine line{axis, parse_double(args.fixed.substr(0, comma)),
                      parse_double(args.fixed.substr(comma + 1))};

  const AgassiSeriesEngine engine(
      args.j, args.epsilon,
      make_time_grid(model.input_width(), kDefaultSeriesHorizon), {0, 1});

  std::ostringstream out;
  out << "chi,sigma,lambda,p_symmetric,p_hf,p_bcs,p_combined,predicted\n";
  for (int k = 0; k < args.points; ++k) {
    const double s = 2.0 * k / (args.points - 1);
    const auto [chi, sig, lam] = line.point(s);
    const CorrelationSeries series = engine.series(chi, sig, lam, mode);
    Eigen::VectorXd input(series.values.size());
    for (std::size_t v = 0; v < series.values.size(); ++v) {
      input(v) = series.values[v];
    }
    const Eigen::VectorXd probs = model.predict(input);
    Eigen::Index arg = 0;
    probs.maxCoeff(&arg);
    out << fmt(chi) << ',' << fmt(sig) << ',' << fmt(lam);
    for (int c = 0; c < 4; ++c) out << ',' << fmt(probs(c));
    out << ',' << phase_name(static_cast<PhaseLabel>(arg)) << "\n";
  }

  const fs::path outp = resolve_output(args.out.output);
  write_output_file(outp, out.str(), args.out.force);
  write_manifest(outp, "scan",
                 {{"axis", args.axis},
                  {"fixed", args.fixed},
                  {"points", std::to_string(args.points)},
                  {"mode", mode.to_string()},
                  {"model", args.model}},
                 cfg.seed, {{outp.filename().string(), file_digest(outp)}},
                 started);
  std::cout << "wrote " << outp.string() << "\n";
  return kExitOk;
}

int cmd_vqe(const VqeArgs& args) {
  const std::string started = current_timestamp();
  const PauliSum h = lmg_hamiltonian(args.epsilon, args.chi, args.n_particles);

  const StateFamily family = [](const std::vector<double>& t) {
    return lmg_ansatz(t[0]);
  };
  const VqeResult result = vqe_minimize(h, family, {args.theta0});

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense_matrix(h));
  const double exact = es.eigenvalues()(0);
  const double rel = std::abs(result.energy - exact) / std::abs(exact);

  std::ostringstream report;
  report << "model = lmg\n"
         << "epsilon = " << fmt(args.epsilon) << "\n"
         << "chi = " << fmt(args.chi) << "\n"
         << "theta = " << fmt(result.thetas[0]) << "\n"
         << "variational_energy = " << fmt(result.energy) << "\n"
         << "exact_energy = " << fmt(exact) << "\n"
         << "relative_error = " << fmt(rel) << "\n"
         << "converged = " << (result.converged ? "true" : "false") << "\n";
  std::cout << report.str();

  if (!args.output.empty()) {
    const fs::path out = resolve_output(args.output);
    write_output_file(out, report.str(), args.force);
    write_manifest(out, "vqe",
                   {{"chi", fmt(args.chi)}, {"epsilon", fmt(args.epsilon)}}, 0,
                   {{out.filename().string(), file_digest(out)}}, started);
  }
  if (!args.dump_hamiltonian.empty()) {
    write_output_file(resolve_output(args.dump_hamiltonian), serialize(h),
                      args.force);
  }
  return result.converged ? kExitOk : kExitNoConvergence;
}

int cmd_adapt(const AdaptArgs& args) {
  const std::string started = current_timestamp();

  PauliSum h(1);
  if (!args.hamiltonian_file.empty()) {
    h = parse_pauli_sum(read_text_file(resolve_output(args.hamiltonian_file)));
  } else {
    const AgassiParams p{args.epsilon, args.chi, args.sigma, args.lambda,
                         args.j};
    p.validate();
    h = build_agassi(p);
  }

  if (args.pool != "number" && args.pool != "agassi-pairs") {
    throw std::invalid_argument("--pool must be number or agassi-pairs");
  }
  const PoolSymmetry sym = args.pool == "agassi-pairs"
                               ? PoolSymmetry::kAgassiPairs
                               : PoolSymmetry::kNumberConserving;
  const OperatorPool pool = build_pool(h.n_sites(), sym);
  // Hartree-Fock-like reference: lower level filled, upper empty
  const StateVector reference = StateVector::basis_state(
      h.n_sites(), (std::uint64_t{1} << (h.n_sites() / 2)) - 1);

  AdaptOptions opt;
  opt.max_iters = args.max_iters;
  opt.grad_tol = args.grad_tol;
  const AdaptResult result = adapt_vqe(h, pool, reference, opt);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense_matrix(h));
  const double fock_exact = es.eigenvalues()(0);
  const int n_ref = h.n_sites() / 2;
  const auto basis = number_sector_basis(h.n_sites(), n_ref);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sector_es(
      sector_matrix(h, basis));
  const double sector_exact = sector_es.eigenvalues()(0);
  const double rel =
      std::abs(result.energy - sector_exact) / std::abs(sector_exact);

  std::ostringstream report;
  report << "pool_size = " << pool.size() << "\n"
         << "iterations = " << result.iterations << "\n"
         << "converged = " << (result.converged ? "true" : "false") << "\n"
         << "adapt_energy = " << fmt(result.energy) << "\n"
         << "exact_energy_half_filled_sector = " << fmt(sector_exact) << "\n"
         << "exact_energy_full_fock = " << fmt(fock_exact) << "\n"
         << "relative_error_vs_sector = " << fmt(rel) << "\n";
  for (const auto& it : result.trace) {
    report << "step " << it.label << " grad=" << fmt(it.grad_max)
           << " energy=" << fmt(it.energy) << "\n";
  }
  std::cout << report.str();

  std::map<std::string, std::string> digests;
  if (!args.trace_out.empty()) {
    std::ostringstream trace;
    trace << "iter,grad_max,energy\n";
    for (std::size_t k = 0; k < result.trace.size(); ++k) {
      trace << k << ',' << fmt(result.trace[k].grad_max) << ','
            << fmt(result.trace[k].energy) << "\n";
    }
    const fs::path tout = resolve_output(args.trace_out);
    write_output_file(tout, trace.str(), args.force);
    digests[tout.filename().string()] = file_digest(tout);
  }
  if (!args.output.empty()) {
    const fs::path out = resolve_output(args.output);
    write_output_file(out, report.str(), args.force);
    digests[out.filename().string()] = file_digest(out);
    write_manifest(out, "adapt",
                   {{"chi", fmt(args.chi)},
                    {"sigma", fmt(args.sigma)},
                    {"lambda", fmt(args.lambda)},
                    {"j", std::to_string(args.j)},
                    {"pool", args.pool},
                    {"grad_tol", fmt(args.grad_tol)},
                    {"max_iters", std::to_string(args.max_iters)}},
                   0, digests, started);
  }
  if (!args.dump_hamiltonian.empty()) {
    write_output_file(resolve_output(args.dump_hamiltonian), serialize(h),
                      args.force);
  }
  return result.converged ? kExitOk : kExitNoConvergence;
}

}  // namespace nuq::cli
