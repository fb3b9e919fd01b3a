/*
 * Copyright 2026 The Infergate Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// infergate — one binary, four jobs:
//   serve     run the inference gateway
//   sim       stream simulated robot clients at a gateway
//   eval      score a records file and render the comparison table
//   quantize  8-bit-quantize a model file and report the size ratio
// plus gen-model / gen-scene helpers so a demo needs no external assets.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "infergate/detect/backend.hpp"
#include "infergate/detect/layer_stack.hpp"
#include "infergate/detect/model_io.hpp"
#include "infergate/eval/comparison.hpp"
#include "infergate/eval/metrics.hpp"
#include "infergate/eval/records.hpp"
#include "infergate/gateway/config.hpp"
#include "infergate/gateway/gateway.hpp"
#include "infergate/net/socket.hpp"
#include "infergate/quant/quantize.hpp"
#include "infergate/sim/client.hpp"
#include "infergate/sim/scene.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBind = 3;

std::atomic<bool> g_stop_requested{false};

void handle_signal(int) { g_stop_requested.store(true); }

// ---------------------------------------------------------------- serve

struct ServeArgs {
  std::string listen = "127.0.0.1:9930";
  std::string config_path;
  std::string detector = "micro-cnn";
  std::string model_path;
  std::string scene_path;
  double stats_interval = 10.0;
  bool quantized = false;
};

std::unique_ptr<infergate::detect::DetectorBackend> build_detector(
    const ServeArgs& args, const infergate::gateway::GatewayConfig& config) {
  using namespace infergate;
  if (args.detector == "oracle") {
    if (args.scene_path.empty()) {
      throw gateway::ConfigError("--detector oracle requires --scene");
    }
    return std::make_unique<detect::OracleDetector>(
        sim::load_scene(args.scene_path));
  }
  detect::LayerStack stack = args.model_path.empty()
                                 ? detect::make_micro_model()
                                 : detect::load_model(args.model_path);
  detect::DetectOptions opts;
  opts.confidence_threshold = config.confidence_threshold;
  opts.nms_iou_threshold = config.nms_iou;
  opts.num_classes = config.class_names.empty()
                         ? opts.num_classes
                         : static_cast<uint32_t>(config.class_names.size());
  opts.run_quantized = args.quantized;
  return std::make_unique<detect::MicroCnnDetector>(std::move(stack), opts);
}

int cmd_serve(const ServeArgs& args) {
  using namespace infergate;
  try {
    gateway::GatewayOptions opts;
    net::Address addr = net::parse_address(args.listen);
    opts.listen_host = addr.host;
    opts.listen_port = addr.port;
    if (!args.config_path.empty()) {
      opts.config = gateway::load_config(args.config_path);
    }
    auto detector = build_detector(args, opts.config);
    std::string detector_name = detector->name();

    gateway::Gateway gw(std::move(opts), std::move(detector));
    gw.start();
    std::cout << "listening on " << addr.host << ":" << gw.port()
              << " detector=" << detector_name << std::endl;

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    auto last_stats = std::chrono::steady_clock::now();
    while (!g_stop_requested.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
      auto now = std::chrono::steady_clock::now();
      if (args.stats_interval > 0 &&
          std::chrono::duration<double>(now - last_stats).count() >=
              args.stats_interval) {
        std::cout << gw.stats_line() << std::endl;
        last_stats = now;
      }
    }
    gw.stop();
    std::cout << gw.stats_line() << std::endl;
    return kExitOk;
  } catch (const gateway::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const net::BindError& e) {
    std::cerr << "bind error: " << e.what() << "\n";
    return kExitBind;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

// ------------------------------------------------------------------ sim

struct SimArgs {
  std::string gateway = "127.0.0.1:9930";
  uint32_t robots = 1;
  double fps = 30.0;
  double duration = 10.0;
  uint32_t crowding = 3;
  uint64_t seed = 1;
  std::string report_path;
  std::string scene_path;
  std::string scene_out;
  double jitter = 0.0;
  double stall_probability = 0.0;
  double time_scale = 1.0;
  uint32_t classes = 4;
  uint16_t width = 640;
  uint16_t height = 480;
};

int cmd_sim(const SimArgs& args) {
  using namespace infergate;
  try {
    net::Address addr = net::parse_address(args.gateway);
    sim::SceneSpec scene =
        args.scene_path.empty()
            ? sim::make_scene(args.width, args.height, args.crowding,
                              args.classes, args.seed)
            : sim::load_scene(args.scene_path);
    if (!args.scene_out.empty()) {
      sim::save_scene(scene, args.scene_out);
    }

    std::vector<sim::ClientReport> reports(args.robots);
    std::vector<std::thread> threads;
    threads.reserve(args.robots);
    for (uint32_t i = 0; i < args.robots; ++i) {
      threads.emplace_back([&, i] {
        sim::StreamProfile profile;
        profile.nominal_fps = args.fps;
        profile.jitter_max = args.jitter;
        profile.stall_probability = args.stall_probability;
        profile.time_scale = args.time_scale;
        profile.seed = args.seed + i;
        reports[i] = sim::run_client(profile, scene, addr.host, addr.port,
                                     "robot-" + std::to_string(i + 1),
                                     args.duration);
      });
    }
    for (auto& t : threads) {
      t.join();
    }

    std::vector<eval::EvalRecord> all_records;
    uint64_t sent = 0, results = 0, actions = 0;
    bool any_failed = false;
    for (const auto& r : reports) {
      std::cout << r.robot_id << ": sent=" << r.frames_sent
                << " results=" << r.results_received
                << " actions=" << r.actions_received << " stalls=" << r.stalls
                << " reason=" << r.disconnect_reason << "\n";
      sent += r.frames_sent;
      results += r.results_received;
      actions += r.actions_received;
      any_failed = any_failed || !r.connected;
      all_records.insert(all_records.end(), r.records.begin(), r.records.end());
    }
    std::cout << "total: sent=" << sent << " results=" << results
              << " dropped_or_lost=" << (sent - results)
              << " actions=" << actions << "\n";
    if (!args.report_path.empty()) {
      eval::save_records(all_records, args.report_path);
      std::cout << "report written to " << args.report_path << "\n";
    }
    return any_failed ? kExitError : kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

// ----------------------------------------------------------------- eval

struct EvalArgs {
  std::string records_path;
  uint32_t crowded_threshold = 10;
  std::string baseline_path;
  std::string out_path;
};

int cmd_eval(const EvalArgs& args) {
  using namespace infergate;
  try {
    std::vector<eval::EvalRecord> records =
        eval::load_records(args.records_path);
    eval::EvalOptions opts;
    opts.crowded_threshold = args.crowded_threshold;
    eval::MetricReport report = eval::evaluate(records, opts);

    std::string table;
    if (!args.baseline_path.empty()) {
      std::vector<eval::BaselineRow> baselines =
          eval::load_baseline(args.baseline_path);
      table = eval::render_comparison(report, baselines);
      std::cout << table;
    }
    std::string summary = eval::render_report(report);
    std::cout << summary;
    if (!args.out_path.empty()) {
      std::ofstream out(args.out_path);
      if (!out) {
        throw eval::EvalError("cannot write " + args.out_path);
      }
      out << table << summary;
      std::cout << "report written to " << args.out_path << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

// ------------------------------------------------------------- quantize

int cmd_quantize(const std::string& in_path, const std::string& out_path,
                 const std::string& mask) {
  using namespace infergate;
  try {
    detect::LayerStack stack = detect::load_model(in_path);
    std::vector<size_t> indices = mask == "all"
                                      ? detect::weight_layer_indices(stack)
                                      : detect::conv_layer_indices(stack);
    std::vector<uint64_t> param_counts;
    std::vector<bool> quantize_mask;
    for (size_t i = 0; i < stack.layers.size(); ++i) {
      uint64_t n = 1;
      if (stack.layers[i].weight_shape.empty()) {
        n = 0;
      } else {
        for (uint32_t d : stack.layers[i].weight_shape) {
          n *= d;
        }
      }
      if (n == 0) {
        continue;
      }
      param_counts.push_back(n);
      quantize_mask.push_back(std::find(indices.begin(), indices.end(), i) !=
                              indices.end());
    }
    detect::quantize_layers(stack, indices);
    detect::save_model(stack, out_path);

    quant::ModelSizeReport size =
        quant::model_size_report(param_counts, quantize_mask);
    std::printf("quantized %zu of %zu weight tensors\n", indices.size(),
                param_counts.size());
    std::printf("fp32 bytes:      %llu\n",
                static_cast<unsigned long long>(size.fp32_bytes));
    std::printf("quantized bytes: %llu\n",
                static_cast<unsigned long long>(size.quantized_bytes));
    std::printf("size ratio:      %.4f\n", size.ratio);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"real-time object-detection inference gateway"};
  app.require_subcommand(1);

  ServeArgs serve_args;
  CLI::App* serve = app.add_subcommand("serve", "run the inference gateway");
  serve->add_option("--listen", serve_args.listen, "listen address host:port");
  serve->add_option("--config", serve_args.config_path, "gateway config file");
  serve->add_option("--detector", serve_args.detector, "micro-cnn or oracle")
      ->check(CLI::IsMember({"micro-cnn", "oracle"}));
  serve->add_option("--model", serve_args.model_path, "model weights file");
  serve->add_option("--scene", serve_args.scene_path,
                    "scene file (oracle detector)");
  serve->add_option("--stats-interval", serve_args.stats_interval,
                    "seconds between stats lines (0 disables)");
  serve->add_flag("--quantized", serve_args.quantized,
                  "run the int8 inference path");

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand("sim", "stream simulated robots");
  sim->add_option("--gateway", sim_args.gateway, "gateway address host:port");
  sim->add_option("--robots", sim_args.robots, "number of concurrent robots");
  sim->add_option("--fps", sim_args.fps, "nominal frames per second");
  sim->add_option("--duration", sim_args.duration, "camera seconds to stream");
  sim->add_option("--crowding", sim_args.crowding, "objects per frame");
  sim->add_option("--seed", sim_args.seed, "random seed");
  sim->add_option("--report", sim_args.report_path, "records file to write");
  sim->add_option("--scene", sim_args.scene_path,
                  "scene file (default: generated from seed)");
  sim->add_option("--scene-out", sim_args.scene_out,
                  "write the generated scene here");
  sim->add_option("--jitter", sim_args.jitter,
                  "max extra interval fraction per frame");
  sim->add_option("--stall-probability", sim_args.stall_probability,
                  "per-frame stall chance");
  sim->add_option("--time-scale", sim_args.time_scale,
                  "wall-clock compression factor");
  sim->add_option("--classes", sim_args.classes, "number of object classes");
  sim->add_option("--width", sim_args.width, "frame width");
  sim->add_option("--height", sim_args.height, "frame height");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "score a records file");
  eval->add_option("--records", eval_args.records_path, "records file")
      ->required();
  eval->add_option("--crowded-threshold", eval_args.crowded_threshold,
                   "truth count that makes a frame crowded");
  eval->add_option("--baseline", eval_args.baseline_path,
                   "baseline fixture (method,map50,inference_ms)");
  eval->add_option("--out", eval_args.out_path, "write the report here");

  std::string quant_in, quant_out, quant_mask = "conv";
  CLI::App* quantize = app.add_subcommand("quantize", "int8-quantize a model");
  quantize->add_option("in", quant_in, "input model")->required();
  quantize->add_option("out", quant_out, "output model")->required();
  quantize->add_option("--mask", quant_mask, "which tensors to quantize")
      ->check(CLI::IsMember({"conv", "all"}));

  std::string gm_out;
  uint64_t gm_seed = 1;
  uint32_t gm_classes = 4;
  CLI::App* gen_model = app.add_subcommand("gen-model", "write a fresh model");
  gen_model->add_option("out", gm_out, "output model")->required();
  gen_model->add_option("--seed", gm_seed, "weight seed");
  gen_model->add_option("--classes", gm_classes, "number of classes");

  std::string gs_out;
  uint64_t gs_seed = 1;
  uint32_t gs_objects = 3, gs_classes = 4;
  uint16_t gs_width = 640, gs_height = 480;
  CLI::App* gen_scene = app.add_subcommand("gen-scene", "write a fresh scene");
  gen_scene->add_option("out", gs_out, "output scene")->required();
  gen_scene->add_option("--seed", gs_seed, "layout seed");
  gen_scene->add_option("--objects", gs_objects, "objects in the scene");
  gen_scene->add_option("--classes", gs_classes, "number of classes");
  gen_scene->add_option("--width", gs_width, "frame width");
  gen_scene->add_option("--height", gs_height, "frame height");

  CLI11_PARSE(app, argc, argv);

  if (serve->parsed()) {
    return cmd_serve(serve_args);
  }
  if (sim->parsed()) {
    return cmd_sim(sim_args);
  }
  if (eval->parsed()) {
    return cmd_eval(eval_args);
  }
  if (quantize->parsed()) {
    return cmd_quantize(quant_in, quant_out, quant_mask);
  }
  if (gen_model->parsed()) {
    try {
      infergate::detect::MicroModelConfig cfg;
      cfg.seed = gm_seed;
      cfg.num_classes = gm_classes;
      infergate::detect::save_model(infergate::detect::make_micro_model(cfg),
                                    gm_out);
      std::cout << "model written to " << gm_out << "\n";
      return kExitOk;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  if (gen_scene->parsed()) {
    try {
      infergate::sim::save_scene(
          infergate::sim::make_scene(gs_width, gs_height, gs_objects,
                                     gs_classes, gs_seed),
          gs_out);
      std::cout << "scene written to " << gs_out << "\n";
      return kExitOk;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  return kExitError;
}
