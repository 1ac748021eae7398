// Copyright 2026 The Entrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// entrain: command-line front end.
//
//   entrain analyze --manifest study.json --out DIR [--alpha A] [--grid-step S]
//                   [--k K] [--delta D] [--workers N]
//   entrain analyze --manifest study.json --stream [--dyad ID]
//   entrain frames  --wav in.wav --out DIR
//   entrain segment --wav in.wav [--speaker NAME] [--out segments.csv]
//   entrain demo    --out DIR [--dyads N] [--seconds S]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "entrain/audio_io.hpp"
#include "entrain/error.hpp"
#include "entrain/pipeline.hpp"
#include "entrain/prosody.hpp"
#include "entrain/segmentation.hpp"
#include "entrain/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace entrain;

struct AnalyzeArgs {
  std::string manifest;
  std::string out;
  std::optional<double> alpha;
  std::optional<double> grid_step;
  std::optional<std::size_t> k;
  std::optional<double> delta;
  std::optional<unsigned> workers;
  bool stream = false;
  std::string dyad;
};

int run_analyze(const AnalyzeArgs& args) {
  ConfigOverrides flags{args.alpha, args.grid_step, args.k, args.delta, args.workers};
  const StudyManifest manifest = load_manifest(args.manifest, flags);

  if (args.stream) {
    const SessionManifest* chosen = nullptr;
    if (!args.dyad.empty()) {
      for (const auto& d : manifest.dyads) {
        if (d.dyad_id == args.dyad) chosen = &d;
      }
      if (chosen == nullptr) throw Error(ErrorCode::kInvalidConfig, "no dyad '" + args.dyad + "'");
    } else if (manifest.dyads.size() == 1) {
      chosen = &manifest.dyads.front();
    } else {
      throw Error(ErrorCode::kInvalidConfig, "--stream needs --dyad when the manifest lists several");
    }
    write_stream_events(std::cout, stream_session(*chosen));
    std::cout.flush();
    return std::cout ? 0 : 1;
  }

  if (args.out.empty()) throw Error(ErrorCode::kInvalidConfig, "--out is required without --stream");
  const StudyReport report = run_study(manifest);
  emit_outputs(report, args.out);
  std::size_t failed = 0;
  for (const auto& d : report.dyads) {
    if (!d.ok()) {
      ++failed;
      std::cerr << "dyad " << d.dyad_id << ": " << d.error << '\n';
    }
  }
  std::cerr << report.dyads.size() << " dyads analyzed, " << failed << " with errors; wrote "
            << args.out << '\n';
  return 0;
}

int run_frames(const std::string& wav, const std::string& out) {
  const AudioBuffer audio = load_wav(wav);
  const ProsodyTracks tracks = analyze_prosody(audio);
  fs::create_directories(out);
  write_frame_track_csv(fs::path(out) / "pitch.csv", tracks.pitch);
  write_frame_track_csv(fs::path(out) / "intensity.csv", tracks.intensity);
  return 0;
}

int run_segment(const std::string& wav, const std::string& speaker, const std::string& out) {
  const AudioBuffer audio = load_wav(wav);
  const auto segments = detect_utterances(rms_intensity(audio), VadConfig{}, speaker);
  if (out.empty()) {
    write_segments_csv(std::cout, segments);
  } else {
    write_segments_csv(fs::path(out), segments);
  }
  return 0;
}

// Two conditions; the first half of each condition's dyads converge.
int run_demo(const std::string& out, int dyads, double seconds) {
  const fs::path dir(out);
  fs::create_directories(dir);
  std::string manifest = "{\n  \"config\": {\"alpha\": 0.01, \"grid_step\": 0.1, \"k\": 7},\n  \"dyads\": [\n";
  for (int i = 0; i < dyads; ++i) {
    const bool human = i % 2 == 0;
    const bool converging = human ? (i / 2) % 4 != 3 : (i / 2) % 4 == 0;
    synth::DialogueSpec spec;
    spec.duration = seconds;
    spec.seed = 1000 + static_cast<std::uint64_t>(i);
    spec.coupling_start = converging ? 0.0 : 0.9;
    spec.coupling_end = converging ? 0.95 : 0.0;
    const std::string id = "d" + std::to_string(i + 1);
    synth::write_dialogue(synth::dialogue(spec), spec.sample_rate, dir / id);
    manifest += "    {\"id\": \"" + id + "\", \"condition\": \"" + (human ? "human" : "robot") +
                "\", \"tutor_audio\": \"" + id + "/tutor.wav\", \"participant_audio\": \"" + id +
                "/participant.wav\"}" + (i + 1 < dyads ? ",\n" : "\n");
  }
  manifest += "  ]\n}\n";
  std::ofstream(dir / "study.json") << manifest;
  std::cerr << "wrote " << (dir / "study.json").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic-prosodic entrainment analysis"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "Analyze a study manifest");
  a->add_option("--manifest", analyze.manifest, "Study manifest JSON")->required();
  a->add_option("--out", analyze.out, "Output directory");
  a->add_option("--alpha", analyze.alpha, "Significance level");
  a->add_option("--grid-step", analyze.grid_step, "Resampling grid step (s)");
  a->add_option("--k", analyze.k, "KNN neighbours");
  a->add_option("--delta", analyze.delta, "Synchrony lag (s); disables lag search");
  a->add_option("--workers", analyze.workers, "Concurrent dyads (0 = all cores)");
  a->add_flag("--stream", analyze.stream, "Emit window events for one dyad as NDJSON on stdout");
  a->add_option("--dyad", analyze.dyad, "Dyad to stream");

  std::string wav;
  std::string out;
  std::string speaker = "speaker";
  auto* frames = app.add_subcommand("frames", "Dump pitch and intensity frame tracks");
  frames->add_option("--wav", wav, "Input WAV")->required();
  frames->add_option("--out", out, "Output directory")->required();

  auto* segment = app.add_subcommand("segment", "Detect utterances in one recording");
  segment->add_option("--wav", wav, "Input WAV")->required();
  segment->add_option("--speaker", speaker, "Speaker label");
  segment->add_option("--out", out, "Output CSV (default stdout)");

  int demo_dyads = 8;
  double demo_seconds = 90.0;
  auto* demo = app.add_subcommand("demo", "Write a synthetic two-condition study");
  demo->add_option("--out", out, "Output directory")->required();
  demo->add_option("--dyads", demo_dyads, "Number of dyads")->check(CLI::Range(1, 1000));
  demo->add_option("--seconds", demo_seconds, "Session length (s)")->check(CLI::Range(10.0, 3600.0));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*a) return run_analyze(analyze);
    if (*frames) return run_frames(wav, out);
    if (*segment) return run_segment(wav, speaker, out);
    if (*demo) return run_demo(out, demo_dyads, demo_seconds);
  } catch (const std::exception& e) {
    std::cerr << "entrain: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
