// End-to-end checks of the command-line tool. The binary path comes
// from the SIGNJOINT_CLI environment variable (set by ctest).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "signjoint/annotations.hpp"
#include "signjoint/embedding.hpp"
#include "signjoint/manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using signjoint::cli::read_file;
using signjoint::cli::write_file;

namespace {

std::string cli_path() {
  const char* env = std::getenv("SIGNJOINT_CLI");
  REQUIRE_MESSAGE(env != nullptr, "SIGNJOINT_CLI must point at the signjoint binary");
  return env;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "signjoint_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = scratch_dir() / ("stdout" + std::to_string(counter));
  const fs::path err = scratch_dir() / ("stderr" + std::to_string(counter));
  ++counter;
  const std::string cmd =
      cli_path() + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(status);
  res.out = read_file(out.string());
  res.err = read_file(err.string());
  return res;
}

std::string annotations_fixture() {
  return R"({"id":"s1","episode_id":"e1","subtitle":"hello tree","span":[0.0,2.0],"segments":[{"start_s":0.1,"end_s":0.8,"words":["hello"],"sign_type":null},{"start_s":0.9,"end_s":1.6,"words":["tree"],"sign_type":null}]})"
         "\n"
         R"({"id":"s2","episode_id":"e1","subtitle":"you","span":[2.0,3.0],"segments":[{"start_s":2.1,"end_s":2.7,"words":["you"],"sign_type":"P"}]})"
         "\n";
}

}  // namespace

TEST_CASE("cli: unknown subcommand is a usage error") {
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("cli: missing input file exits 2 and names the path") {
  const fs::path gt = scratch_dir() / "gt_missing_probe.jsonl";
  write_file(gt.string(), annotations_fixture());
  const RunResult res =
      run_cli("eval-cslr --pred /nonexistent/pred.jsonl --gt " + gt.string());
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("/nonexistent/pred.jsonl") != std::string::npos);
}

TEST_CASE("cli: eval-cslr on identical files reports a perfect score") {
  const fs::path gt = scratch_dir() / "gt.jsonl";
  const fs::path out = scratch_dir() / "report.json";
  write_file(gt.string(), annotations_fixture());
  const RunResult res = run_cli("eval-cslr --pred " + gt.string() + " --gt " + gt.string() +
                                " --out " + out.string());
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(read_file(out.string()));
  CHECK(report["wer"] == 0.0);
  CHECK(report["miou"] == 1.0);
  CHECK(report["f1"]["0.10"] == 1.0);
  CHECK(report["f1"]["0.50"] == 1.0);
  CHECK(report["schema_version"] == 1);
  // manifest sits alongside with digests of the exact bytes read
  const json manifest = json::parse(read_file(out.string() + ".manifest.json"));
  CHECK(manifest["command"] == "eval-cslr");
  CHECK(manifest["inputs"][gt.string()] ==
        signjoint::cli::sha256_hex(annotations_fixture()));
  CHECK(manifest["tool_version"] == "0.1.0");
}

TEST_CASE("cli: eval-cslr rejects malformed annotations with exit 2") {
  const fs::path bad = scratch_dir() / "bad.jsonl";
  write_file(bad.string(), "{not json\n");
  const fs::path gt = scratch_dir() / "gt2.jsonl";
  write_file(gt.string(), annotations_fixture());
  const RunResult res = run_cli("eval-cslr --pred " + bad.string() + " --gt " + gt.string());
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("line 1") != std::string::npos);
}

TEST_CASE("cli: postprocess writes an annotation file of segments") {
  const fs::path pred = scratch_dir() / "topk.json";
  // Six repeats of label 0 at score 0.9, then noise below threshold.
  json topk;
  topk["fps"] = 25.0;
  topk["stride"] = 2;
  topk["window"] = 16;
  topk["k"] = 5;
  topk["label_vocab"] = {{{"words", {"hello"}}, {"sign_type", nullptr}},
                         {{"words", {"tree"}}, {"sign_type", nullptr}}};
  json frames = json::array();
  for (int i = 0; i < 6; ++i) frames.push_back({{0, 0.9}});
  for (int i = 0; i < 4; ++i) frames.push_back({{1, 0.4}});
  topk["frames"] = frames;
  write_file(pred.string(), topk.dump());

  const fs::path out = scratch_dir() / "segments.jsonl";
  const RunResult res = run_cli("postprocess --predictions " + pred.string() +
                                " --theta 0.6 --min-repeats 6 --out " + out.string());
  REQUIRE(res.exit_code == 0);
  const auto records = signjoint::corpus::parse_annotations(read_file(out.string()));
  REQUIRE(records.size() == 1);
  REQUIRE(records[0].segments.size() == 1);
  CHECK(records[0].segments[0].gloss.primary() == "hello");
  CHECK(records[0].segments[0].confidence == doctest::Approx(0.9));
}

TEST_CASE("cli: pseudo-label emits frame correspondences") {
  const fs::path seg = scratch_dir() / "segments_in.jsonl";
  write_file(seg.string(), annotations_fixture());
  const RunResult res = run_cli("pseudo-label --segments " + seg.string());
  REQUIRE(res.exit_code == 0);
  const json out = json::parse(res.out);
  CHECK(out["records"].size() == 2);
  CHECK(out["records"][0]["id"] == "s1");
  CHECK(!out["records"][0]["labels"].empty());
}

TEST_CASE("cli: grad-check exits cleanly with small errors") {
  const RunResult res = run_cli("grad-check --op all --seeds 3");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("hnnce") != std::string::npos);
  CHECK(res.out.find("FAIL") == std::string::npos);
}

TEST_CASE("cli: train + eval-retrieval + eval-cslr work end to end on files") {
  const fs::path cfg = scratch_dir() / "train.cfg";
  write_file(cfg.string(),
             "steps=60\n"
             "eval_every=0\n"
             "synth.train_sentences=24\n"
             "synth.val_sentences=8\n"
             "synth.vocab_size=8\n"
             "synth.latent_dim=6\n"
             "synth.video_dim=10\n"
             "synth.text_dim=12\n"
             "synth.noise=0.0\n");
  const fs::path dir = scratch_dir() / "run";
  REQUIRE(run_cli("train --config " + cfg.string() + " --out " + dir.string()).exit_code == 0);

  // Retrieval report over the emitted joint-space embeddings.
  const fs::path report = scratch_dir() / "retr.json";
  const RunResult retr =
      run_cli("eval-retrieval --queries " + (dir / "val_sentence_text.emb").string() +
              " --gallery " + (dir / "val_sentence_video.emb").string() + " --ks 1,5 --out " +
              report.string());
  REQUIRE(retr.exit_code == 0);
  const json rj = json::parse(read_file(report.string()));
  CHECK(rj.contains("t2v"));
  CHECK(rj["t2v"].contains("r1"));
  CHECK(rj["t2v"].contains("medr"));
  CHECK(rj["v2t"]["r5"].get<double>() >= 0.0);

  // End-to-end CSLR over the emitted frame embeddings and gallery.
  const RunResult cslr = run_cli(
      "eval-cslr --frame-embeddings " + (dir / "val_frames_joint.emb").string() + " --gallery " +
      (dir / "gallery_joint.emb").string() + " --gallery-vocab " + (dir / "vocab.txt").string() +
      " --gt " + (dir / "val.jsonl").string());
  REQUIRE(cslr.exit_code == 0);
  const json cj = json::parse(cslr.out);
  CHECK(cj["counts"]["gt_length"].get<int>() > 0);
}

TEST_CASE("cli: reruns are byte-identical and thread count does not matter") {
  const fs::path cfg = scratch_dir() / "det.cfg";
  write_file(cfg.string(),
             "steps=25\n"
             "eval_every=0\n"
             "synth.train_sentences=16\n"
             "synth.val_sentences=6\n"
             "synth.vocab_size=6\n"
             "synth.latent_dim=5\n"
             "synth.video_dim=8\n"
             "synth.text_dim=9\n");
  const fs::path a = scratch_dir() / "det_a";
  const fs::path b = scratch_dir() / "det_b";
  REQUIRE(run_cli("train --config " + cfg.string() + " --out " + a.string()).exit_code == 0);
  REQUIRE(run_cli("train --config " + cfg.string() + " --out " + b.string()).exit_code == 0);
  for (const char* name :
       {"train_log.jsonl", "eval.json", "val_sentence_video.emb", "val_frames_joint.emb",
        "gallery_joint.emb", "head_video_sign.w.emb", "val.jsonl"}) {
    CHECK_MESSAGE(read_file((a / name).string()) == read_file((b / name).string()), name);
  }

  // Same evaluation with different thread counts.
  const fs::path r1 = scratch_dir() / "r1.json";
  const fs::path r4 = scratch_dir() / "r4.json";
  const std::string common = "eval-cslr --pred " + (a / "val.jsonl").string() + " --gt " +
                             (a / "val.jsonl").string() + " --out ";
  REQUIRE(run_cli(common + r1.string() + " --threads 1").exit_code == 0);
  REQUIRE(run_cli(common + r4.string() + " --threads 4").exit_code == 0);
  CHECK(read_file(r1.string()) == read_file(r4.string()));
}

TEST_CASE("cli: synth writes a loadable corpus") {
  const fs::path dir = scratch_dir() / "synth_out";
  const fs::path cfg = scratch_dir() / "synth.cfg";
  write_file(cfg.string(),
             "synth.train_sentences=6\nsynth.val_sentences=3\nsynth.vocab_size=6\n"
             "synth.latent_dim=5\nsynth.video_dim=8\nsynth.text_dim=9\n");
  REQUIRE(run_cli("synth --config " + cfg.string() + " --out " + dir.string()).exit_code == 0);
  const auto train = signjoint::corpus::parse_annotations(read_file((dir / "train.jsonl").string()));
  CHECK(train.size() == 6);
  const auto frames = signjoint::corpus::load_embeddings(read_file((dir / "frames_train.emb").string()));
  CHECK(frames.matrix.dim == 8);
  CHECK(frames.role == signjoint::corpus::EmbeddingRole::kFrameVideo);
  const json manifest = json::parse(read_file((dir / "run.manifest.json").string()));
  CHECK(manifest["command"] == "synth");
}
