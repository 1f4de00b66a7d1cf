#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "contact/checkpoint.hpp"
#include "contact/errors.hpp"
#include "contact/gradcheck.hpp"
#include "contact/records_io.hpp"
#include "pr_plot.hpp"

namespace contact::cli {

namespace {

using io::json;

struct HeadArgs {
  std::size_t width = 1024;
  std::size_t maps = 32;
  std::size_t gn_groups = 8;
  double attention_std = 0.01;
  bool freeze_gn_affine = false;
};

struct GradcheckArgs {
  GradCheckOptions options;
};

struct GenArgs {
  SyntheticSpec spec;
  std::string out = "synthetic.jsonl";
};

struct TrainArgs {
  SyntheticSpec spec;
  HeadArgs head;
  TrainConfig train;
  std::string data;
  std::string checkpoint = "model.ckpt";
  std::string trace = "trace.jsonl";
  double min_accuracy = 0.0;
};

struct InferArgs {
  std::string checkpoint;
  std::string features;
  std::string out = "detections.jsonl";
  bool ablate_spatial = false;
  double min_accuracy = 0.0;
};

struct EvalArgs {
  std::string annotations;
  std::string detections;
  std::string out;
  std::string plot;
};

struct StatsArgs {
  std::string annotations;
  bool json = false;
};

struct BaselineArgs {
  std::string annotations;
  std::string keypoints;
  std::string eval_annotations;
  std::string dump_features;
  std::string detections;
  pose::BaselineTrainOptions options;
};

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  return out;
}

void echo_config(const CLI::App& sub, std::ostream& out) {
  std::istringstream lines(sub.config_to_str(true, false));
  out << "# effective config\n";
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) out << "#   " << line << '\n';
  }
}

void add_spec_options(CLI::App& sub, SyntheticSpec& spec) {
  sub.add_option("--n", spec.n, "Spatial locations per feature map")->capture_default_str();
  sub.add_option("--d", spec.d, "Channels per location")->capture_default_str();
  sub.add_option("--k-min", spec.k_min, "Fewest union regions per hand")->capture_default_str();
  sub.add_option("--k-max", spec.k_max, "Most union regions per hand")->capture_default_str();
  sub.add_option("--rule", spec.rule, "Planted rule id")->capture_default_str();
  sub.add_option("--noise-std", spec.noise_std, "Gaussian feature noise")->capture_default_str();
  sub.add_option("--seed", spec.seed, "Seed for data, initialization and split")->capture_default_str();
  sub.add_option("--count", spec.count, "Number of samples")->capture_default_str();
  sub.add_option("--p-self", spec.p_self, "Self-contact rate")->capture_default_str();
  sub.add_option("--p-other", spec.p_other, "Other-person-contact rate")->capture_default_str();
  sub.add_option("--p-object", spec.p_object, "Object-contact rate")->capture_default_str();
  sub.add_option("--unsure-rate", spec.unsure_rate, "Per-state Unsure replacement rate")->capture_default_str();
  sub.add_option("--amplitude", spec.marker_amplitude, "Planted marker amplitude")->capture_default_str();
}

int cmd_gradcheck(const GradcheckArgs& args, std::ostream& out) {
  const GradCheckReport report = grad_check(args.options);
  for (const auto& m : report.modules) {
    out << m.module << ": trials " << m.trials << ", elements " << m.elements_checked << ", max rel err "
        << m.max_rel_error << '\n';
  }
  for (const auto& f : report.failures) {
    out << "FAIL " << f.module << " trial " << f.trial << ' ' << f.tensor << '[' << f.index << "] analytic "
        << f.analytic << " numeric " << f.numeric << " rel err " << f.rel_error << '\n';
  }
  out << (report.passed() ? "gradcheck passed" : "gradcheck FAILED") << " at tolerance " << args.options.tolerance
      << '\n';
  return report.passed() ? kExitOk : kExitFailure;
}

int cmd_gen(const GenArgs& args, std::ostream& out) {
  validate(args.spec);
  const Dataset data = generate(args.spec);
  auto file = open_out(args.out);
  for (std::size_t i = 0; i < data.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "synthetic-%06zu", i);
    io::write_record(file, io::to_json(io::FeatureRecord{id, {}, 1.0, data[i], true}));
  }
  out << "wrote " << data.size() << " samples to " << args.out << '\n';
  return kExitOk;
}

Dataset load_feature_dataset(const std::string& path) {
  Dataset data;
  io::for_each_record(std::filesystem::path(path), [&](const json& j, std::size_t line) {
    auto rec = io::parse_feature_record(j, line);
    if (!rec.has_label) throw IngestError("training records need a 'contact' field", line);
    if (!data.empty() && (rec.sample.hand.n() != data[0].hand.n() || rec.sample.hand.d() != data[0].hand.d())) {
      throw IngestError("feature dimensions differ from the first record", line);
    }
    data.push_back(std::move(rec.sample));
  });
  return data;
}

bool report_accuracy(const std::array<double, kNumStates>& acc, const std::array<std::size_t, kNumStates>& labeled,
                     double min_accuracy, std::ostream& out) {
  bool ok = true;
  for (std::size_t s = 0; s < kNumStates; ++s) {
    out << "accuracy " << kStateNames[s] << ' ' << fixed(acc[s]) << " (" << labeled[s] << " labeled)\n";
    if (labeled[s] > 0 && acc[s] < min_accuracy) ok = false;
  }
  if (!ok) out << "accuracy below --min-accuracy " << min_accuracy << '\n';
  return ok;
}

int cmd_train(const TrainArgs& args, std::ostream& out) {
  validate(args.train);
  Dataset data;
  if (args.data.empty()) {
    validate(args.spec);
    data = generate(args.spec);
  } else {
    data = load_feature_dataset(args.data);
  }
  if (data.empty()) throw IngestError("no training samples");

  TrainConfig tc = args.train;
  tc.seed = args.spec.seed;
  HeadConfig hc = head_config_for(tc, data[0].hand.n(), data[0].hand.d());
  hc.width = args.head.width;
  hc.maps = args.head.maps;
  hc.gn_groups = args.head.gn_groups;
  hc.attention_init_std = args.head.attention_std;
  hc.train_gn_affine = !args.head.freeze_gn_affine;
  hc.seed = args.spec.seed;
  ContactHead model(hc);

  auto trace = open_out(args.trace);
  const TrainResult result =
      train(model, data, tc, [&](const TraceRecord& rec) { io::write_record(trace, io::to_json(rec)); });
  save_model(args.checkpoint, model);
  out << "trained " << tc.max_steps << " steps on " << result.train_indices.size() << " samples, "
      << result.heldout_indices.size() << " held out\n";
  out << "held-out loss " << fixed(result.final_heldout.loss) << '\n';
  const bool ok = report_accuracy(result.final_heldout.accuracy, result.final_heldout.labeled, args.min_accuracy, out);
  out << "checkpoint " << args.checkpoint << ", trace " << args.trace << '\n';
  return ok ? kExitOk : kExitFailure;
}

int cmd_infer(const InferArgs& args, std::ostream& out) {
  const ContactHead model = load_model(args.checkpoint);
  const ScoreOptions opts{!args.ablate_spatial};
  auto file = open_out(args.out);
  std::array<std::size_t, kNumStates> labeled{}, correct{};
  std::size_t count = 0;
  NoGradGuard no_grad;
  io::for_each_record(std::filesystem::path(args.features), [&](const json& j, std::size_t line) {
    const auto rec = io::parse_feature_record(j, line);
    Tensor logits;
    try {
      logits = model.hand_score(rec.sample.hand, rec.sample.unions, opts);
    } catch (const DimensionError& e) {
      throw IngestError(e.what(), line);
    }
    const auto probs = predict(logits);
    io::write_record(file, io::to_json(eval::DetectionRecord{rec.image_id, rec.box, rec.det_score, probs}));
    ++count;
    if (!rec.has_label) return;
    for (std::size_t s = 0; s < kNumStates; ++s) {
      if (rec.sample.label[s] == TriState::kUnsure) continue;
      ++labeled[s];
      if ((probs[s] > 0.5) == (rec.sample.label[s] == TriState::kYes)) ++correct[s];
    }
  });
  out << "scored " << count << " hands into " << args.out << '\n';
  std::array<double, kNumStates> acc{};
  bool any_labeled = false;
  for (std::size_t s = 0; s < kNumStates; ++s) {
    any_labeled = any_labeled || labeled[s] > 0;
    acc[s] = labeled[s] ? static_cast<double>(correct[s]) / static_cast<double>(labeled[s]) : 0.0;
  }
  if (!any_labeled) return kExitOk;
  return report_accuracy(acc, labeled, args.min_accuracy, out) ? kExitOk : kExitFailure;
}

json summary_json(const eval::EvaluationSummary& summary) {
  json states = json::object();
  for (std::size_t s = 0; s < kNumStates; ++s) {
    const auto& c = summary.curves[s];
    json points = json::array();
    for (const auto& p : c.points) points.push_back({p.recall, p.precision});
    states[std::string(kStateNames[s])] = {{"ap", c.ap ? json(*c.ap) : json(nullptr)},
                                          {"num_ground_truth", c.num_ground_truth},
                                          {"num_excluded", c.num_excluded},
                                          {"pr", points}};
  }
  return {{"map", summary.map}, {"states", states}};
}

void print_summary(const eval::EvaluationSummary& summary, std::ostream& out) {
  for (std::size_t s = 0; s < kNumStates; ++s) {
    const auto& c = summary.curves[s];
    out << "AP " << kStateNames[s] << ' ' << (c.ap ? fixed(100.0 * *c.ap, 2) + "%" : std::string("n/a")) << " ("
        << c.num_ground_truth << " positives, " << c.num_excluded << " excluded)\n";
  }
  out << "mAP " << fixed(100.0 * summary.map, 2) << "%\n";
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const auto gts = io::read_annotations(args.annotations);
  const auto dets = io::read_detections(args.detections);
  const auto summary = eval::evaluate(dets, gts);
  print_summary(summary, out);
  if (!args.out.empty()) {
    auto file = open_out(args.out);
    file << summary_json(summary).dump(2) << '\n';
  }
  if (!args.plot.empty()) {
    auto file = open_out(args.plot);
    file << pr_plot_svg(summary);
  }
  return kExitOk;
}

int cmd_stats(const StatsArgs& args, std::ostream& out) {
  const auto records = io::read_annotations(args.annotations);
  const DatasetStats stats = dataset_stats(records);
  if (args.json) {
    json states = json::object();
    for (std::size_t s = 0; s < kNumStates; ++s) {
      const auto& t = stats.states[s];
      states[std::string(kStateNames[s])] = {{"yes", t.yes}, {"no", t.no}, {"unsure", t.unsure}};
    }
    out << json{{"images", stats.images},
                {"hands", stats.hands},
                {"hands_passing_size_filter", stats.hands_passing_size_filter},
                {"states", states}}
               .dump(2)
        << '\n';
    return kExitOk;
  }
  out << "images " << stats.images << "\nhands " << stats.hands << "\nhands passing size filter "
      << stats.hands_passing_size_filter << '\n';
  for (std::size_t s = 0; s < kNumStates; ++s) {
    const auto& t = stats.states[s];
    out << kStateNames[s] << " yes " << t.yes << " no " << t.no << " unsure " << t.unsure << '\n';
  }
  return kExitOk;
}

struct HandFeature {
  std::string image_id;
  geom::AxisBox box;
  ContactLabel label;
  std::optional<pose::FeatureVector> feature;
};

std::vector<HandFeature> baseline_features(const std::vector<ImageRecord>& records, const io::PoseIndex& poses) {
  static const std::vector<pose::PoseRecord> kNoPoses;
  std::vector<HandFeature> out;
  for (const auto& r : records) {
    auto it = poses.find(r.image_id);
    const auto& people = it == poses.end() ? kNoPoses : it->second;
    for (const auto& h : r.hands) {
      HandFeature f{r.image_id, h.box(), h.contact, std::nullopt};
      if (auto b = pose::build_feature(f.box, people, r.objects, r.width, r.height)) f.feature = b->concat();
      out.push_back(std::move(f));
    }
  }
  return out;
}

int cmd_baseline(const BaselineArgs& args, std::ostream& out) {
  const auto poses = io::read_keypoints(args.keypoints);
  const auto train_records = io::read_annotations(args.annotations);
  const auto train_hands = baseline_features(train_records, poses);

  std::vector<std::pair<pose::FeatureVector, ContactLabel>> examples;
  for (const auto& h : train_hands) {
    if (h.feature) examples.emplace_back(*h.feature, h.label);
  }
  out << "training on " << examples.size() << " of " << train_hands.size() << " hands (others lack a visible wrist)\n";
  const auto classifier = pose::train_baseline(examples, args.options);

  const auto eval_records =
      args.eval_annotations.empty() ? train_records : io::read_annotations(args.eval_annotations);
  const auto eval_hands = args.eval_annotations.empty() ? train_hands : baseline_features(eval_records, poses);

  if (!args.dump_features.empty()) {
    auto file = open_out(args.dump_features);
    for (std::size_t c = 0; c < pose::kFeatureDims; ++c) file << (c ? "," : "") << 'f' << c;
    file << '\n';
    for (const auto& h : eval_hands) {
      if (!h.feature) continue;
      for (std::size_t c = 0; c < pose::kFeatureDims; ++c) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", (*h.feature)[c]);
        file << (c ? "," : "") << buf;
      }
      file << '\n';
    }
  }

  std::vector<eval::DetectionRecord> dets;
  std::array<std::size_t, kNumStates> labeled{}, correct{};
  for (const auto& h : eval_hands) {
    const auto probs = h.feature ? classifier.predict(*h.feature) : std::array<double, kNumStates>{0.5, 0.5, 0.5, 0.5};
    dets.push_back({h.image_id, h.box, 1.0, probs});
    for (std::size_t s = 0; s < kNumStates; ++s) {
      if (h.label[s] == TriState::kUnsure) continue;
      ++labeled[s];
      if ((probs[s] > 0.5) == (h.label[s] == TriState::kYes)) ++correct[s];
    }
  }
  if (!args.detections.empty()) {
    auto file = open_out(args.detections);
    for (const auto& d : dets) io::write_record(file, io::to_json(d));
  }
  std::array<double, kNumStates> acc{};
  for (std::size_t s = 0; s < kNumStates; ++s) {
    acc[s] = labeled[s] ? static_cast<double>(correct[s]) / static_cast<double>(labeled[s]) : 0.0;
  }
  report_accuracy(acc, labeled, 0.0, out);
  print_summary(eval::evaluate(dets, eval_records), out);
  return kExitOk;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  sink->set_pattern("[%l] %v");
  auto logger = std::make_shared<spdlog::logger>("contactnet", sink);
  logger->set_level(spdlog::level::info);
  if (const char* env = std::getenv("CONTACT_LOG_LEVEL")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      err << "ignoring unknown CONTACT_LOG_LEVEL '" << env << "'\n";
    } else {
      logger->set_level(level);
    }
  }
  return logger;
}

// Splices the entries of `--config FILE` in front of the subcommand's own
// arguments, so flags given on the command line take precedence.
std::vector<std::string> with_config_file(std::vector<std::string> args) {
  if (args.empty()) return args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const std::vector<CLI::ConfigItem> items = CLI::ConfigINI().from_file(path);
  std::vector<std::string> injected;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && item.parents.front() != args.front()) continue;
    if (item.name == "config") continue;
    for (const auto& value : item.inputs) injected.push_back("--" + item.name + "=" + value);
    if (item.inputs.empty()) injected.push_back("--" + item.name);
  }
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto previous = spdlog::default_logger();
  spdlog::set_default_logger(make_logger(err));
  struct Restore {
    std::shared_ptr<spdlog::logger> logger;
    ~Restore() { spdlog::set_default_logger(logger); }
  } restore{previous};

  CLI::App app{"Hand contact estimation: attention head, evaluation and baselines", "contactnet"};
  app.require_subcommand(1);
  app.fallthrough(false);

  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  auto add_command = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Read options from a key=value file (flags override it)");
    return sub;
  };

  GradcheckArgs gc;
  auto* gradcheck = add_command("gradcheck", "Compare analytic gradients with central differences");
  gradcheck->add_option("--module", gc.options.modules, "Restrict to a module (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->check(CLI::IsMember(grad_check_modules()));
  gradcheck->add_option("--trials", gc.options.trials, "Seeded shapes per module")->capture_default_str();
  gradcheck->add_option("--tolerance", gc.options.tolerance, "Largest accepted relative error")->capture_default_str();
  gradcheck->add_option("--step", gc.options.step, "Finite-difference step")->capture_default_str();
  gradcheck->add_option("--seed", gc.options.seed, "Seed")->capture_default_str();

  GenArgs gen_args;
  auto* gen = add_command("gen", "Write a synthetic feature dataset with planted contact rules");
  add_spec_options(*gen, gen_args.spec);
  gen->add_option("--out", gen_args.out, "Output feature file")->capture_default_str();

  TrainArgs tr;
  auto* train_cmd = add_command("train", "Train the contact head on synthetic or stored features");
  add_spec_options(*train_cmd, tr.spec);
  train_cmd->add_option("--data", tr.data, "Labeled feature file (default: generate synthetic data)");
  train_cmd->add_option("--width", tr.head.width, "FC embedding width")->capture_default_str();
  train_cmd->add_option("--maps", tr.head.maps, "Spatial attention maps")->capture_default_str();
  train_cmd->add_option("--gn-groups", tr.head.gn_groups, "GroupNorm groups")->capture_default_str();
  train_cmd->add_option("--attention-std", tr.head.attention_std, "Attention weight init std")->capture_default_str();
  train_cmd->add_flag("--freeze-gn-affine", tr.head.freeze_gn_affine, "Keep GroupNorm scale 1 and shift 0");
  train_cmd->add_option("--lr", tr.train.lr, "Initial learning rate")->capture_default_str();
  train_cmd->add_option("--batch", tr.train.batch, "Samples per step")->capture_default_str();
  train_cmd->add_option("--plateau-patience", tr.train.plateau_patience, "Steps without improvement before decay")
      ->capture_default_str();
  train_cmd->add_option("--plateau-min-delta", tr.train.plateau_min_delta, "Required held-out loss improvement")
      ->capture_default_str();
  train_cmd->add_option("--lr-decay", tr.train.lr_decay, "Learning-rate factor on plateau")->capture_default_str();
  train_cmd->add_option("--max-steps", tr.train.max_steps, "SGD steps")->capture_default_str();
  train_cmd->add_flag("--ablate-cross", tr.train.ablate_cross, "Remove cross-feature attention");
  train_cmd->add_flag("--ablate-spatial", tr.train.ablate_spatial, "Remove spatial attention");
  train_cmd->add_option("--lambda", tr.train.lambda, "Contact loss weight")->capture_default_str();
  train_cmd->add_option("--holdout-fraction", tr.train.holdout_fraction, "Held-out share")->capture_default_str();
  train_cmd->add_option("--eval-interval", tr.train.eval_interval, "Steps between held-out checks (0: per epoch)")
      ->capture_default_str();
  train_cmd->add_option("--checkpoint", tr.checkpoint, "Output checkpoint")->capture_default_str();
  train_cmd->add_option("--trace", tr.trace, "Output metric trace")->capture_default_str();
  train_cmd->add_option("--min-accuracy", tr.min_accuracy, "Exit 1 if a held-out state accuracy is lower")
      ->capture_default_str();

  InferArgs inf;
  auto* infer = add_command("infer", "Score hands in a feature file with a trained checkpoint");
  infer->add_option("--checkpoint", inf.checkpoint, "Trained checkpoint")->required();
  infer->add_option("--features", inf.features, "Feature file")->required();
  infer->add_option("--out", inf.out, "Output detection file")->capture_default_str();
  infer->add_flag("--ablate-spatial", inf.ablate_spatial, "Score with the cross-attention branch only");
  infer->add_option("--min-accuracy", inf.min_accuracy, "Exit 1 if a labeled state accuracy is lower")
      ->capture_default_str();

  EvalArgs ev;
  auto* eval_cmd = add_command("eval", "Joint detection and contact AP per state");
  eval_cmd->add_option("--annotations", ev.annotations, "Ground-truth annotation file")->required();
  eval_cmd->add_option("--detections", ev.detections, "Detection file")->required();
  eval_cmd->add_option("--out", ev.out, "Write a JSON summary with PR points");
  eval_cmd->add_option("--plot", ev.plot, "Write an SVG precision/recall plot");

  StatsArgs st;
  auto* stats = add_command("stats", "Per-state Yes/No/Unsure tallies of an annotation file");
  stats->add_option("--annotations", st.annotations, "Annotation file")->required();
  stats->add_flag("--json", st.json, "Print JSON");

  BaselineArgs bl;
  auto* baseline = add_command("baseline", "Pose-heuristic baseline on 52-dimensional wrist features");
  baseline->add_option("--annotations", bl.annotations, "Training annotation file")->required();
  baseline->add_option("--keypoints", bl.keypoints, "Keypoint file covering all images")->required();
  baseline->add_option("--eval-annotations", bl.eval_annotations, "Evaluation annotations (default: training set)");
  baseline->add_option("--dump-features", bl.dump_features, "Write evaluation features as CSV");
  baseline->add_option("--detections", bl.detections, "Write baseline detections");
  baseline->add_option("--iterations", bl.options.iterations, "Gradient-descent iterations")->capture_default_str();
  baseline->add_option("--lr", bl.options.learning_rate, "Gradient-descent step")->capture_default_str();

  try {
    std::vector<std::string> args = with_config_file(std::vector<std::string>(argv + std::min(argc, 1), argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (e.get_exit_code() == 0) return kExitOk;
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "see 'contactnet " << sub->get_name() << " --help'\n";
    } else {
      err << "see 'contactnet --help'\n";
    }
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  echo_config(*sub, out);
  try {
    if (sub == gradcheck) return cmd_gradcheck(gc, out);
    if (sub == gen) return cmd_gen(gen_args, out);
    if (sub == train_cmd) return cmd_train(tr, out);
    if (sub == infer) return cmd_infer(inf, out);
    if (sub == eval_cmd) return cmd_eval(ev, out);
    if (sub == stats) return cmd_stats(st, out);
    if (sub == baseline) return cmd_baseline(bl, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IngestError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CheckpointError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const TrainingDiverged& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace contact::cli
