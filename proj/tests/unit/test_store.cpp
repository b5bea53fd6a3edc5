#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support/oracle.hpp"
#include "support/tempdir.hpp"
#include "vsse/bench.hpp"
#include "vsse/store.hpp"

using namespace vsse;
using namespace vsse::store;

namespace {

Bytes slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void spit(const fs::path& p, const Bytes& b) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

std::map<fs::path, Bytes> snapshot(const fs::path& dir) {
  std::map<fs::path, Bytes> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() != "lock") out[e.path()] = slurp(e.path());
  }
  return out;
}

bool contains(const Bytes& hay, ByteView needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

SearchReport honest(Store& s, const Keyword& w, Scheme scheme) {
  return search(s, w, scheme, {});
}

}  // namespace

TEST_CASE("keygen creates the three role subtrees and refuses to clobber") {
  testing::TempDir tmp;
  SeededRandom rng(1);
  const fs::path dir = tmp.path() / "store";
  {
    Store s = Store::create(dir, false, rng);
    CHECK(fs::is_directory(dir / "owner"));
    CHECK(fs::is_directory(dir / "cloud"));
    CHECK(fs::is_directory(dir / "auditor"));
    std::vector<fs::path> auditor(fs::directory_iterator(dir / "auditor"), {});
    REQUIRE(auditor.size() == 1);
    CHECK(auditor[0].filename() == "pk.bin");
    CHECK(fs::file_size(auditor[0]) == 5 + crypto::G2Element::kSize);
  }
  CHECK_THROWS_AS(Store::create(dir, false, rng), UsageError);
  CHECK_NOTHROW(Store::create(dir, true, rng));
  CHECK_THROWS_AS(Store::open(tmp.path() / "missing"), UsageError);
}

TEST_CASE("a store is locked while a command holds it") {
  testing::TempDir tmp;
  SeededRandom rng(2);
  Store a = Store::create(tmp.path() / "s", false, rng);
  CHECK_THROWS_AS(Store::open(tmp.path() / "s"), UsageError);
}

TEST_CASE("cloud files hold no symmetric keys and the auditor file only pk") {
  testing::TempDir tmp;
  SeededRandom rng(3);
  Store s = Store::create(tmp.path() / "s", false, rng);
  build(s, oracle::to_db(oracle::random_pairs(rng, 10, 60)), rng);
  search(s, Keyword("kw0"), Scheme::kForward, {});
  search(s, Keyword("kw0"), Scheme::kStatic, {});
  const OwnerKeys k = s.load_keys();
  const auto sk = k.forward.bls.sk.to_bytes();
  for (const auto& [path, bytes] : snapshot(s.dir() / "cloud")) {
    INFO(path.string());
    for (const crypto::SymKey* key : {&k.statik.base_key, &k.statik.tag_master, &k.forward.base_key,
                              &k.forward.seed_master, &k.forward.tag_master}) {
      CHECK_FALSE(contains(bytes, key->bytes));
    }
    CHECK_FALSE(contains(bytes, sk));
  }
  CHECK(decode_pk_file(slurp(s.dir() / "auditor" / "pk.bin")) == k.forward.bls.pk);
}

TEST_CASE("persist then reload is byte-identical for cloud files and equal for owner state") {
  testing::TempDir tmp;
  SeededRandom rng(4);
  Store s = Store::create(tmp.path() / "s", false, rng);
  build(s, oracle::to_db(oracle::random_pairs(rng, 15, 120)), rng);
  update(s, Structure::kAdd, DocId::from_u64(99), {Keyword("kw1"), Keyword("new")}, rng);
  update(s, Structure::kDel, DocId::from_u64(99), {Keyword("kw1")}, rng);
  search(s, Keyword("kw1"), Scheme::kForward, {});

  const auto before = snapshot(s.dir() / "cloud");
  CloudFiles c = s.load_cloud();
  s.save_cloud(c);
  CHECK(snapshot(s.dir() / "cloud") == before);

  OwnerState o = s.load_owner();
  s.save_owner(o);
  CHECK(s.load_owner() == o);
  CHECK(decode_owner_state(encode_owner_state(o)) == o);
  CHECK(o.registry.deleted_pairs() == 1);
}

TEST_CASE("build: empty input, counts and oracle answers") {
  testing::TempDir tmp;
  SeededRandom rng(5);
  Store s = Store::create(tmp.path() / "s", false, rng);

  SUBCASE("empty corpus gives empty cloud files") {
    std::istringstream in("");
    build(s, parse_corpus(in), rng);
    CloudFiles c = s.load_cloud();
    CHECK(c.static_index.empty());
    CHECK(c.forward.index.empty());
    CHECK(c.forward.tsig.size() == 0);
  }
  SUBCASE("three-line fixture") {
    std::istringstream in(
        "alpha\t00000000000000000000000000000001,00000000000000000000000000000002\n"
        "beta\t00000000000000000000000000000002\n"
        "gamma\t00000000000000000000000000000003,00000000000000000000000000000004,"
        "00000000000000000000000000000005\n");
    PlainDb db = parse_corpus(in);
    build(s, db, rng);
    CloudFiles c = s.load_cloud();
    CHECK(c.forward.tsig.size() == 6);
    CHECK(c.static_index.size() == 6 + 3);
    OwnerState o = s.load_owner();
    CHECK(o.forward.add.at(Keyword("alpha")).counter == 2);
    CHECK(o.forward.add.at(Keyword("gamma")).counter == 3);
    CHECK(o.static_counts.at(Keyword("beta")) == 2);
  }
  SUBCASE("random database, every keyword, both schemes") {
    oracle::Pairs pairs = oracle::random_pairs(rng, 20, 150);
    build(s, oracle::to_db(pairs), rng);
    for (const auto& [w, ids] : oracle::invert(pairs)) {
      for (Scheme sc : {Scheme::kStatic, Scheme::kForward}) {
        SearchReport r = honest(s, Keyword(w), sc);
        CHECK(r.accepted);
        CHECK(r.ids == ids);
      }
    }
    SearchReport none = honest(s, Keyword("absent"), Scheme::kForward);
    CHECK(none.accepted);
    CHECK(none.ids.empty());
    CHECK(honest(s, Keyword("absent"), Scheme::kStatic).accepted);
  }
}

TEST_CASE("corpus parse errors name the line") {
  auto err = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_corpus(in);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(err("a\t00000000000000000000000000000001\nno tab here\n").rfind("line 2:", 0) == 0);
  CHECK(err("\n\na\t0001\n").rfind("line 3:", 0) == 0);
  CHECK(err("a\t00000000000000000000000000000001,00000000000000000000000000000001\n")
            .rfind("line 1:", 0) == 0);
  CHECK(err("a\t\n").rfind("line 1:", 0) == 0);
  CHECK(err("\t00000000000000000000000000000001\n").rfind("line 1:", 0) == 0);
  CHECK(err("a\t0000000000000000000000000000000g\n").rfind("line 1:", 0) == 0);
  CHECK(err("a\t00000000000000000000000000000001\r\n").empty());
}

TEST_CASE("updates: add, delete, refusals") {
  testing::TempDir tmp;
  SeededRandom rng(6);
  Store s = Store::create(tmp.path() / "s", false, rng);
  PlainDb db;
  db.add(Keyword("a"), DocId::from_u64(1));
  build(s, db, rng);

  update(s, Structure::kAdd, DocId::from_u64(2), {Keyword("a"), Keyword("b")}, rng);
  for (Scheme sc : {Scheme::kStatic, Scheme::kForward}) {
    CHECK(honest(s, Keyword("a"), sc).ids ==
          std::vector<DocId>{DocId::from_u64(1), DocId::from_u64(2)});
    CHECK(honest(s, Keyword("b"), sc).ids == std::vector<DocId>{DocId::from_u64(2)});
  }
  update(s, Structure::kDel, DocId::from_u64(2), {Keyword("a")}, rng);
  for (Scheme sc : {Scheme::kStatic, Scheme::kForward}) {
    SearchReport r = honest(s, Keyword("a"), sc);
    CHECK(r.accepted);
    CHECK(r.ids == std::vector<DocId>{DocId::from_u64(1)});
  }
  CHECK(s.load_cloud().forward.del_tsig.size() == 1);

  const auto before = snapshot(s.dir());
  CHECK_THROWS_AS(update(s, Structure::kDel, DocId::from_u64(7), {Keyword("a")}, rng),
                  InputError);
  CHECK_THROWS_AS(update(s, Structure::kDel, DocId::from_u64(2), {Keyword("a")}, rng),
                  InputError);
  CHECK_THROWS_AS(update(s, Structure::kAdd, DocId::from_u64(1), {Keyword("a")}, rng),
                  InputError);
  CHECK_THROWS_AS(update(s, Structure::kAdd, DocId::from_u64(8), {}, rng), InputError);
  CHECK(snapshot(s.dir()) == before);
}

TEST_CASE("100 scripted updates answer like a fresh build of the final state") {
  testing::TempDir tmp;
  SeededRandom rng(7);
  Store s = Store::create(tmp.path() / "s", false, rng);
  oracle::Pairs pairs = oracle::random_pairs(rng, 8, 40);
  build(s, oracle::to_db(pairs), rng);
  std::map<std::string, std::vector<DocId>> live = oracle::invert(pairs);

  for (int k = 0; k < 100; ++k) {
    std::vector<std::string> nonempty;
    for (const auto& [w, ids] : live) {
      if (!ids.empty()) nonempty.push_back(w);
    }
    if (rng.uniform(3) == 0 && !nonempty.empty()) {
      const std::string w = nonempty[rng.uniform(nonempty.size())];
      auto& ids = live[w];
      const std::size_t j = rng.uniform(ids.size());
      update(s, Structure::kDel, ids[j], {Keyword(w)}, rng);
      ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(j));
    } else {
      const DocId id = oracle::random_id(rng);
      const std::string w = "kw" + std::to_string(rng.uniform(10));
      update(s, Structure::kAdd, id, {Keyword(w)}, rng);
      live[w].push_back(id);
    }
  }

  Store fresh = Store::create(tmp.path() / "fresh", false, rng);
  PlainDb final_db;
  for (const auto& [w, ids] : live) final_db.add_all(Keyword(w), ids);
  build(fresh, final_db, rng);
  CHECK(s.load_cloud().forward.tsig.size() + s.load_cloud().forward.del_tsig.size() ==
        s.load_owner().registry.added_pairs() + s.load_owner().registry.deleted_pairs());

  for (int k = 0; k < 11; ++k) {
    const Keyword w("kw" + std::to_string(k));
    for (Scheme sc : {Scheme::kStatic, Scheme::kForward}) {
      SearchReport a = honest(s, w, sc), b = honest(fresh, w, sc);
      INFO(w.text());
      CHECK(a.accepted);
      CHECK(b.accepted);
      CHECK(a.ids == b.ids);
      CHECK(a.ids == live[w.text()]);
    }
  }
}

TEST_CASE("corrupted files are reported as store errors") {
  testing::TempDir tmp;
  SeededRandom rng(8);
  Store s = Store::create(tmp.path() / "s", false, rng);
  build(s, oracle::to_db(oracle::random_pairs(rng, 5, 20)), rng);
  const fs::path tsig = s.dir() / "cloud" / "tsig.bin";
  const Bytes good = slurp(tsig);

  Bytes bad = good;
  bad[0] = 'X';
  spit(tsig, bad);
  CHECK_THROWS_AS(s.load_cloud(), StoreError);

  bad = good;
  bad[4] = 2;
  spit(tsig, bad);
  CHECK_THROWS_AS(s.load_cloud(), StoreError);

  bad = good;
  bad.resize(bad.size() - 1);
  spit(tsig, bad);
  CHECK_THROWS_AS(s.load_cloud(), StoreError);

  bad = good;
  bad.push_back(0);
  spit(tsig, bad);
  CHECK_THROWS_AS(s.load_cloud(), StoreError);

  spit(tsig, good);
  CHECK_NOTHROW(s.load_cloud());
  fs::remove(s.dir() / "owner" / "state.bin");
  CHECK_THROWS_AS(s.load_owner(), StoreError);
  CHECK_THROWS_AS(decode_keys(Bytes{'V', 'K', 'E', 'Y', 1}), StoreError);
  CHECK_THROWS_AS(decode_pk_file(Bytes(101, 0)), StoreError);
}

TEST_CASE("adversarial searches against the store reject") {
  testing::TempDir tmp;
  SeededRandom rng(9);
  Store s = Store::create(tmp.path() / "s", false, rng);
  PlainDb db;
  db.add_all(Keyword("a"), {DocId::from_u64(1), DocId::from_u64(2), DocId::from_u64(3)});
  db.add_all(Keyword("b"), {DocId::from_u64(4), DocId::from_u64(5), DocId::from_u64(6)});
  build(s, db, rng);
  honest(s, Keyword("b"), Scheme::kForward);
  honest(s, Keyword("b"), Scheme::kStatic);

  SearchReport flip = search(s, Keyword("a"), Scheme::kForward,
                             {sim::Strategy::kFlipIdBit, 1, Structure::kAdd});
  CHECK_FALSE(flip.accepted);
  CHECK(flip.reason == "pairing-fail");
  for (sim::Strategy st : sim::tampering_strategies()) {
    for (Scheme sc : {Scheme::kStatic, Scheme::kForward}) {
      INFO(sim::to_string(st) << (sc == Scheme::kStatic ? " static" : " forward"));
      SearchReport r = search(s, Keyword("a"), sc, {st, 2, Structure::kAdd});
      CHECK(r.tampered);
      CHECK_FALSE(r.accepted);
      CHECK(r.ids.empty());
    }
  }
}

TEST_CASE("soundness against on-disk cloud files finds no forgery") {
  testing::TempDir tmp;
  SeededRandom rng(10);
  Store s = Store::create(tmp.path() / "s", false, rng);
  build(s, oracle::to_db(oracle::random_pairs(rng, 10, 50)), rng);
  update(s, Structure::kDel, s.load_owner().registry.added.begin()->second.front(),
         {s.load_owner().registry.added.begin()->first}, rng);
  const auto before = snapshot(s.dir());
  sim::SoundnessReport r = soundness(s, 10, rng);
  CHECK(r.total_forgeries() == 0);
  const auto& h = r.tallies.at(sim::Strategy::kHonest);
  CHECK(h.accepted == h.searches);
  for (sim::Strategy st : sim::tampering_strategies()) {
    CHECK(r.tallies.at(st).tampered_searches > 0);
  }
  CHECK(snapshot(s.dir()) == before);
}

TEST_CASE("bench rows: constant proof size, counted per-role work") {
  SeededRandom rng(11);
  auto rows = bench::run_bench({1, 10, 100}, 5, rng);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    const auto n = r.result_size;
    CHECK(r.proof_bytes == 80);
    CHECK(r.tsig_entries == n);
    CHECK(r.auditor_ops.pairings == 2);
    CHECK(r.owner_ops.scalar_muls == n);
    CHECK(r.owner_ops.scalar_adds == n);
    CHECK(r.cloud_ops.tsig_lookups == n);
    CHECK(r.cloud_ops.g1_muls == n - 1);
  }
  CHECK(bench::to_tsv(rows).find("proof_bytes") != std::string::npos);
  CHECK_THROWS_AS(bench::run_bench({1}, 4, rng), InputError);
  CHECK_THROWS_AS(bench::run_bench({0}, 5, rng), InputError);
}
