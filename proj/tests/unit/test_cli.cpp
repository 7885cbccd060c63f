#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "manifest.hpp"
#include "romanlens/cli.hpp"
#include "romanlens/model.hpp"
#include "test_support.hpp"

using namespace romanlens;
using namespace romanlens::testing;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  const int code = cli::run(args, out, err, in);
  return {code, out.str(), err.str()};
}

const std::string kVocab = data_file("vocab.json").string();
const std::string kDataset = data_file("concepts.jsonl").string();

// Random checkpoint matching the bundled vocabulary.
std::string small_checkpoint(const TempDir& dir, const std::string& name = "model.rlns") {
  const std::string path = (dir / name).string();
  const auto r = run_cli({"random-checkpoint", "--vocab", kVocab, "--n-layers", "2", "--dim", "16",
                          "--seed", "3", "--out", path});
  REQUIRE(r.code == 0);
  return path;
}

json read_json(const std::filesystem::path& p) { return json::parse(read_text(p)); }

}  // namespace

TEST_CASE("validate accepts the bundled fixtures") {
  const auto r = run_cli({"validate", "--vocab", kVocab, "--dataset", kDataset, "--scheme",
                          data_file("schemes/devanagari_cp.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("dataset: 105 records") != std::string::npos);
  CHECK(r.out.find("ok") != std::string::npos);
}

TEST_CASE("missing checkpoint is a data error naming the path") {
  TempDir dir;
  const std::string missing = (dir / "absent.rlns").string();
  const auto r = run_cli({"latent-rom", "--checkpoint", missing, "--vocab", kVocab, "--dataset",
                          kDataset, "--out", (dir / "o").string()});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find(missing) != std::string::npos);
}

TEST_CASE("identity romanization echoes its input") {
  const std::string identity = data_file("schemes/identity.json").string();
  const std::string text = "English: \"flower\" Hindi: \"phool\"\nsecond line\n";
  const auto r = run_cli({"romanize", "--scheme", identity}, text);
  CHECK(r.code == 0);
  CHECK(r.out == text);
  const auto uncovered = run_cli({"romanize", "--scheme", identity}, "फूल");
  CHECK(uncovered.code == cli::kExitData);
  CHECK(uncovered.err.find("coverage") != std::string::npos);

  const auto natural = run_cli({"romanize", "--scheme",
                                data_file("schemes/devanagari_natural.json").string()}, "फूल");
  CHECK(natural.out == "phool");
  const auto cp = data_file("schemes/devanagari_cp.json").string();
  const auto there = run_cli({"romanize", "--scheme", cp}, "मछली");
  const auto back = run_cli({"romanize", "--scheme", cp, "--reverse"}, there.out);
  CHECK(back.out == "मछली");
  CHECK(run_cli({"romanize", "--scheme", data_file("schemes/devanagari_natural.json").string(),
                 "--reverse"}, "phool").code == cli::kExitData);
}

TEST_CASE("usage errors exit 1 with help text") {
  const auto unknown = run_cli({"lens", "--no-such-flag"});
  CHECK(unknown.code == cli::kExitUsage);
  CHECK(unknown.err.find("--no-such-flag") != std::string::npos);
  CHECK(unknown.err.find("Usage:") != std::string::npos);
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"latent-rom", "--threshold", "1.5", "--out", "x"}).code == cli::kExitUsage);
  CHECK(run_cli({"lens", "--out", "x"}).code == cli::kExitUsage);
  const auto help = run_cli({"patch", "--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("--source-concept") != std::string::npos);
  CHECK(run_cli({"--version"}).out.find('.') != std::string::npos);
}

TEST_CASE("config file values yield to flags") {
  TempDir dir;
  const auto ckpt = small_checkpoint(dir);
  const auto config = dir / "config.json";
  std::ofstream(config) << json{{"checkpoint", ckpt}, {"vocab", kVocab}, {"dataset", kDataset},
                                {"scenario", "first_subword"}, {"threshold", 0.5}, {"window", 2}}
                               .dump();
  const auto out = dir / "run";
  const auto r = run_cli({"latent-rom", "--config", config.string(), "--threshold", "0.2",
                          "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto manifest = read_json(out / "manifest.json");
  CHECK(manifest["config"]["threshold"] == 0.2);
  CHECK(manifest["config"]["scenario"] == "first_subword");
  CHECK(manifest["config"]["window"] == 2);
  CHECK(manifest["config_file"] == config.string());
  CHECK(std::filesystem::exists(out / "latent_rom_first_subword.csv"));

  std::ofstream(dir / "bad.json") << R"({"checkpont": "x"})";
  CHECK(run_cli({"latent-rom", "--config", (dir / "bad.json").string()}).code == cli::kExitUsage);
  std::ofstream(dir / "broken.json") << "{";
  CHECK(run_cli({"latent-rom", "--config", (dir / "broken.json").string()}).code == cli::kExitData);
}

TEST_CASE("manifest digests are SHA-256 of the file bytes") {
  TempDir dir;
  std::ofstream(dir / "abc.txt", std::ios::binary) << "abc";
  CHECK(cli::sha256_file(dir / "abc.txt") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  const auto ckpt = small_checkpoint(dir);
  const auto out = dir / "lens";
  const auto r = run_cli({"lens", "--checkpoint", ckpt, "--vocab", kVocab, "--dataset", kDataset,
                          "--concept", "flower", "--layers", "1:2", "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto manifest = read_json(out / "manifest.json");
  CHECK(manifest["tool"] == "romanlens");
  CHECK(manifest["command"] == "lens");
  CHECK(manifest["inputs"]["checkpoint"]["sha256"] == cli::sha256_file(ckpt));
  CHECK(manifest["inputs"]["vocab"]["sha256"] == cli::sha256_file(kVocab));
  REQUIRE(manifest["outputs"].size() == 2);
  CHECK(manifest["outputs"][1]["sha256"] == cli::sha256_file(out / "lens.svg"));
  CHECK(manifest["prompt"]["concept_id"] == "flower");
  const auto rows = read_csv(out / "lens.csv");
  const std::size_t positions = manifest["prompt"]["token_ids"].size();
  CHECK(rows.size() == 1 + 3 * positions);
}

TEST_CASE("patch writes curves and the experiment record") {
  TempDir dir;
  const auto ckpt = small_checkpoint(dir);
  const auto out = dir / "patch";
  const auto r = run_cli({"patch", "--checkpoint", ckpt, "--vocab", kVocab, "--dataset", kDataset,
                          "--source-concept", "fish", "--target-concept", "sun", "--out",
                          out.string()});
  REQUIRE(r.code == 0);
  for (const char* name : {"curves_native.csv", "curves_romanized.csv"}) {
    const auto rows = read_csv(out / name);
    CHECK(rows.size() == 1 + 2 * 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      for (std::size_t c = 2; c < 5; ++c) {
        const double p = std::stod(rows[i][c]);
        CHECK((p >= 0.0 && p <= 1.0));
      }
    }
  }
  const auto exp = read_json(out / "experiment.json");
  CHECK(exp["prompts"]["romanized"]["sources"][0]["text"].get<std::string>().find("Hindi: \"machhalee\"") !=
        std::string::npos);
  CHECK(exp["kl_source_concept_native_vs_romanized"]["single"].get<double>() >= 0.0);
  CHECK(run_cli({"patch", "--checkpoint", ckpt, "--vocab", kVocab, "--dataset", kDataset,
                 "--source-concept", "fish", "--target-concept", "unicorn", "--out", out.string()})
            .code == cli::kExitUsage);
}

TEST_CASE("langprob writes the comparison report") {
  TempDir dir;
  const auto ckpt = small_checkpoint(dir);
  const auto out = dir / "lp";
  const auto r = run_cli({"langprob", "--checkpoint", ckpt, "--vocab", kVocab, "--dataset",
                          kDataset, "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto summary = read_json(out / "langprob_summary.json");
  CHECK(summary["n_total"] == 105);
  CHECK(summary["n_kept"].get<std::size_t>() + summary["n_discarded"].get<std::size_t>() == 105);
  CHECK(read_csv(out / "langprob.csv").size() == 1 + 2 * summary["n_kept"].get<std::size_t>());
}

TEST_CASE("validate flags a vocabulary and checkpoint mismatch") {
  TempDir dir;
  const auto path = (dir / "v10.rlns").string();
  REQUIRE(run_cli({"random-checkpoint", "--vocab-size", "10", "--n-layers", "1", "--dim", "8",
                   "--heads", "2", "--kv-heads", "1", "--out", path}).code == 0);
  CHECK(std::filesystem::exists(path + ".manifest.json"));
  const auto r = run_cli({"validate", "--vocab", kVocab, "--checkpoint", path});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("vocab_size") != std::string::npos);
  CHECK(run_cli({"validate"}).code == cli::kExitUsage);
}
