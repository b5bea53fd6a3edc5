// vsse: command-line front end over an on-disk store.
//
// Exit codes: 0 success/accept, 1 usage, 2 reject, 3 store corruption.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "vsse/bench.hpp"
#include "vsse/errors.hpp"
#include "vsse/store.hpp"

using namespace vsse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitReject = 2;
constexpr int kExitCorrupt = 3;

std::unique_ptr<RandomSource> make_rng(const std::optional<std::uint64_t>& seed) {
  if (seed) return std::make_unique<SeededRandom>(*seed);
  return std::make_unique<SystemRandom>();
}

std::vector<Keyword> keywords(const std::vector<std::string>& in) {
  std::vector<Keyword> out;
  for (const auto& s : in) out.emplace_back(s);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifiable searchable encryption store"};
  app.require_subcommand(1);

  std::string dir, input, keyword, id_hex, scheme = "forward", adversary = "HONEST";
  std::vector<std::string> kws;
  std::vector<std::size_t> sizes = {1, 10, 100};
  std::size_t reps = 5;
  std::uint64_t trials = 100;
  std::optional<std::uint64_t> seed;
  bool force = false;

  auto* keygen = app.add_subcommand("keygen", "create a store with fresh keys");
  keygen->add_option("dir", dir, "store directory")->required();
  keygen->add_flag("--force", force, "reuse a non-empty directory");

  auto* build = app.add_subcommand("build", "index a keyword<TAB>ids corpus");
  build->add_option("store", dir)->required();
  build->add_option("input", input, "corpus file, - for stdin")->required();

  auto* search = app.add_subcommand("search", "search and verify one keyword");
  search->add_option("store", dir)->required();
  search->add_option("keyword", keyword)->required();
  search->add_option("--scheme", scheme)->check(CLI::IsMember({"static", "forward"}));
  search->add_option("--adversary", adversary, "cloud strategy");

  auto* add = app.add_subcommand("add", "add a document under keywords");
  auto* del = app.add_subcommand("del", "delete a document from keywords");
  for (auto* cmd : {add, del}) {
    cmd->add_option("store", dir)->required();
    cmd->add_option("id", id_hex, "32 hex digits")->required();
    cmd->add_option("keywords", kws)->required();
  }

  auto* bench = app.add_subcommand("bench", "per-role cost against result size");
  bench->add_option("--sizes", sizes)->delimiter(',')->check(CLI::PositiveNumber);
  bench->add_option("--reps", reps)->check(CLI::Range(5, 1000000));

  auto* sound = app.add_subcommand("soundness", "adversary suite on the store's cloud files");
  sound->add_option("store", dir)->required();
  sound->add_option("--trials", trials)->check(CLI::PositiveNumber);

  for (auto* cmd : {keygen, build, search, add, del, bench, sound}) {
    cmd->add_option("--seed", seed, "deterministic randomness");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto rng = make_rng(seed);
    if (*keygen) {
      store::Store::create(dir, force, *rng);
      std::cout << "created store " << dir << '\n';
      return kExitOk;
    }
    if (*bench) {
      std::cout << bench::to_tsv(bench::run_bench(sizes, reps, *rng));
      return kExitOk;
    }

    store::Store st = store::Store::open(dir);
    if (*build) {
      PlainDb db;
      if (input == "-") {
        db = store::parse_corpus(std::cin);
      } else {
        std::ifstream in(input);
        if (!in) throw store::UsageError("cannot read " + input);
        db = store::parse_corpus(in);
      }
      store::build(st, db, *rng);
      std::cout << "indexed " << db.keyword_count() << " keywords, "
                << db.pair_count() << " pairs\n";
      return kExitOk;
    }
    if (*search) {
      sim::AdversaryStrategy adv;
      adv.name = sim::strategy_from_string(adversary);
      adv.seed = seed.value_or(0);
      store::SearchReport r = store::search(
          st, Keyword(keyword),
          scheme == "static" ? store::Scheme::kStatic : store::Scheme::kForward, adv);
      if (adv.name != sim::Strategy::kHonest && !r.tampered) {
        std::cerr << "note: " << adversary << " found nothing to tamper with\n";
      }
      for (const DocId& id : r.ids) std::cout << id.hex() << '\n';
      if (r.accepted) {
        std::cout << "ACCEPT\n";
        return kExitOk;
      }
      std::cout << "REJECT " << r.reason << '\n';
      return kExitReject;
    }
    if (*add || *del) {
      store::update(st, *add ? store::Structure::kAdd : store::Structure::kDel,
                    DocId::from_hex(id_hex), keywords(kws), *rng);
      return kExitOk;
    }
    if (*sound) {
      sim::SoundnessReport r = store::soundness(st, trials, *rng);
      std::cout << r.to_text();
      return r.total_forgeries() == 0 ? kExitOk : kExitReject;
    }
  } catch (const store::StoreError& e) {
    std::cerr << "error: store corrupted: " << e.what() << '\n';
    return kExitCorrupt;
  } catch (const store::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCorrupt;
  }
  return kExitUsage;
}
