#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"

using namespace nuq::cli;

int main(int argc, char** argv) {
  CLI::App app{
      "nuq - schematic nuclear models on qubits: exact and Trotter dynamics,"
      " phase classification, VQE / ADAPT-VQE"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file");

  EvolveArgs evolve;
  auto* cmd_ev = app.add_subcommand(
      "evolve", "C_z correlation time series for one parameter point");
  cmd_ev->add_option("--model", evolve.model, "agassi or annni")
      ->capture_default_str();
  cmd_ev->add_option("--epsilon", evolve.epsilon)->capture_default_str();
  cmd_ev->add_option("--chi", evolve.chi)->capture_default_str();
  cmd_ev->add_option("--sigma", evolve.sigma)->capture_default_str();
  cmd_ev->add_option("--lambda", evolve.lambda)->capture_default_str();
  cmd_ev->add_option("--j", evolve.j, "shell size parameter (2j sites/level)")
      ->capture_default_str();
  cmd_ev->add_option("--n-sites", evolve.n_sites, "annni chain length")
      ->capture_default_str();
  cmd_ev->add_option("--kappa", evolve.kappa)->capture_default_str();
  cmd_ev->add_option("--h-field", evolve.h_field)->capture_default_str();
  cmd_ev->add_option("--mode", evolve.mode, "exact or trotter:N")
      ->capture_default_str();
  cmd_ev->add_option("--samples", evolve.samples)->capture_default_str();
  cmd_ev->add_option("--horizon", evolve.horizon)->capture_default_str();
  cmd_ev->add_option("--pair", evolve.pair, "correlated sites, 1-based")
      ->capture_default_str();
  cmd_ev->add_option("--dump-hamiltonian", evolve.dump_hamiltonian,
                     "also write the qubit Hamiltonian (one term per line)");
  cmd_ev->add_option("--output", evolve.out.output)->required();
  cmd_ev->add_flag("--force", evolve.out.force, "overwrite existing outputs");

  DatasetArgs dataset;
  auto* cmd_ds = app.add_subcommand(
      "dataset", "labeled C_z dataset over the control-parameter lattice");
  cmd_ds->add_option("--points-per-axis", dataset.points_per_axis)
      ->capture_default_str();
  cmd_ds->add_option("--range-lo", dataset.range_lo)->capture_default_str();
  cmd_ds->add_option("--range-hi", dataset.range_hi)->capture_default_str();
  cmd_ds->add_option("--epsilon", dataset.epsilon)->capture_default_str();
  cmd_ds->add_option("--j", dataset.j)->capture_default_str();
  cmd_ds->add_option("--mode", dataset.mode)->capture_default_str();
  cmd_ds->add_option("--samples", dataset.samples)->capture_default_str();
  cmd_ds->add_option("--horizon", dataset.horizon)->capture_default_str();
  cmd_ds->add_option("--points", dataset.points_file,
                     "CSV manifest epsilon,chi,sigma,lambda,j instead of the "
                     "lattice");
  cmd_ds->add_option("--jobs", dataset.jobs, "worker threads (0 = all cores)")
      ->capture_default_str();
  cmd_ds->add_option("--calibration-points", dataset.calibration_points)
      ->capture_default_str();
  cmd_ds->add_option("--d-cut", dataset.d_cut,
                     "deformation cut (skips calibration when all three are "
                     "given)");
  cmd_ds->add_option("--pg-cut", dataset.pg_cut, "like-level pairing cut");
  cmd_ds->add_option("--ph-cut", dataset.ph_cut, "cross-level pairing cut");
  cmd_ds->add_option("--output", dataset.out.output)->required();
  cmd_ds->add_flag("--force", dataset.out.force);

  TrainArgs train;
  auto* cmd_tr = app.add_subcommand("train", "train the phase classifier");
  cmd_tr->add_option("--data", train.data)->required();
  cmd_tr->add_option("--model-out", train.model_out)->required();
  cmd_tr->add_option("--log", train.log_out, "training log CSV");
  cmd_tr->add_option("--seed", train.seed)->capture_default_str();
  cmd_tr->add_option("--lr", train.learning_rate)->capture_default_str();
  cmd_tr->add_option("--momentum", train.momentum)->capture_default_str();
  cmd_tr->add_option("--batch", train.batch_size)->capture_default_str();
  cmd_tr->add_option("--epochs", train.epochs)->capture_default_str();
  cmd_tr->add_option("--split", train.split_fraction)->capture_default_str();
  cmd_tr->add_flag("--force", train.force);

  EvalArgs eval;
  auto* cmd_ev2 = app.add_subcommand("eval", "evaluate a trained classifier");
  cmd_ev2->add_option("--data", eval.data)->required();
  cmd_ev2->add_option("--model", eval.model)->required();
  cmd_ev2->add_option("--split", eval.split, "test, train or all")
      ->capture_default_str();

  ScanArgs scan;
  auto* cmd_sc = app.add_subcommand(
      "scan", "classifier probabilities along one parameter line");
  cmd_sc->add_option("--model", scan.model)->required();
  cmd_sc->add_option("--axis", scan.axis, "chi, sigma or lambda")
      ->capture_default_str();
  cmd_sc->add_option("--fixed", scan.fixed,
                     "the two fixed values, in chi,sigma,lambda order with "
                     "the scanned axis removed")
      ->capture_default_str();
  cmd_sc->add_option("--points", scan.points)->capture_default_str();
  cmd_sc->add_option("--mode", scan.mode)->capture_default_str();
  cmd_sc->add_option("--epsilon", scan.epsilon)->capture_default_str();
  cmd_sc->add_option("--j", scan.j)->capture_default_str();
  cmd_sc->add_option("--output", scan.out.output)->required();
  cmd_sc->add_flag("--force", scan.out.force);

  VqeArgs vqe;
  auto* cmd_vq = app.add_subcommand(
      "vqe", "single-parameter LMG variational ground state");
  cmd_vq->add_flag("--lmg", "use the LMG trial state (the only family)")
      ->default_val(true);
  cmd_vq->add_option("--epsilon", vqe.epsilon)->capture_default_str();
  cmd_vq->add_option("--chi", vqe.chi)->capture_default_str();
  cmd_vq->add_option("--n-particles", vqe.n_particles)->capture_default_str();
  cmd_vq->add_option("--theta0", vqe.theta0)->capture_default_str();
  cmd_vq->add_option("--dump-hamiltonian", vqe.dump_hamiltonian);
  cmd_vq->add_option("--output", vqe.output, "optional report file");
  cmd_vq->add_flag("--force", vqe.force);

  AdaptArgs adapt;
  auto* cmd_ad = app.add_subcommand(
      "adapt", "ADAPT-VQE ground state with a fermionic excitation pool");
  cmd_ad->add_option("--epsilon", adapt.epsilon)->capture_default_str();
  cmd_ad->add_option("--chi", adapt.chi)->capture_default_str();
  cmd_ad->add_option("--sigma", adapt.sigma)->capture_default_str();
  cmd_ad->add_option("--lambda", adapt.lambda)->capture_default_str();
  cmd_ad->add_option("--j", adapt.j)->capture_default_str();
  cmd_ad->add_option("--pool", adapt.pool, "number or agassi-pairs")
      ->capture_default_str();
  cmd_ad->add_option("--max-iters", adapt.max_iters)->capture_default_str();
  cmd_ad->add_option("--grad-tol", adapt.grad_tol)->capture_default_str();
  cmd_ad->add_option("--hamiltonian", adapt.hamiltonian_file,
                     "serialized PauliSum to solve instead of the Agassi "
                     "model");
  cmd_ad->add_option("--trace", adapt.trace_out, "convergence trace CSV");
  cmd_ad->add_option("--dump-hamiltonian", adapt.dump_hamiltonian);
  cmd_ad->add_option("--output", adapt.output, "report file");
  cmd_ad->add_flag("--force", adapt.force);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_ev->parsed()) return cmd_evolve(evolve);
    if (cmd_ds->parsed()) return cmd_dataset(dataset);
    if (cmd_tr->parsed()) return cmd_train(train);
    if (cmd_ev2->parsed()) return cmd_eval(eval);
    if (cmd_sc->parsed()) return cmd_scan(scan);
    if (cmd_vq->parsed()) return cmd_vqe(vqe);
    if (cmd_ad->parsed()) return cmd_adapt(adapt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  std::cerr << "error: no subcommand\n";
  return kExitUsage;
}
