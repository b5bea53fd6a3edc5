#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <sstream>

#include "vsse/bench.hpp"
#include "vsse/crypto.hpp"
#include "vsse/errors.hpp"
#include "vsse/sim.hpp"
#include "vsse/store.hpp"

namespace py = pybind11;
using namespace vsse;

namespace {

std::unique_ptr<RandomSource> make_rng(const std::optional<std::uint64_t>& seed) {
  if (seed) return std::make_unique<SeededRandom>(*seed);
  return std::make_unique<SystemRandom>();
}

std::vector<Keyword> keywords(const std::vector<std::string>& in) {
  std::vector<Keyword> out;
  for (const auto& s : in) out.emplace_back(s);
  return out;
}

py::dict tally_dict(const sim::StrategyTally& t) {
  py::dict d;
  d["sessions"] = t.sessions;
  d["vacuous_sessions"] = t.vacuous_sessions;
  d["searches"] = t.searches;
  d["tampered_searches"] = t.tampered_searches;
  d["accepted"] = t.accepted;
  d["accepted_forgeries"] = t.accepted_forgeries;
  d["reasons"] = t.reasons;
  return d;
}

py::dict report_dict(const sim::SoundnessReport& r) {
  py::dict d;
  for (const auto& [s, t] : r.tallies) d[py::str(sim::to_string(s))] = tally_dict(t);
  return d;
}

py::dict ops_dict(const OpCounts& o) {
  py::dict d;
  d["pairings"] = o.pairings;
  d["g1_muls"] = o.g1_muls;
  d["g1_exps"] = o.g1_exps;
  d["scalar_muls"] = o.scalar_muls;
  d["scalar_adds"] = o.scalar_adds;
  d["tsig_lookups"] = o.tsig_lookups;
  return d;
}

py::bytes to_py(ByteView b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

// Python-side handle; the store lock is held until close() or collection.
class PyStore {
 public:
  explicit PyStore(store::Store s) : dir_(s.dir().string()), s_(std::move(s)) {}

  store::Store& get() {
    if (!s_) throw store::UsageError("store is closed");
    return *s_;
  }
  void close() { s_.reset(); }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::optional<store::Store> s_;
};

}  // namespace

PYBIND11_MODULE(_vsse, m) {
  m.doc() = "Verifiable searchable encryption: on-disk store, simulator and benchmarks";

  auto base = py::register_exception<Error>(m, "VsseError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<store::StoreError>(m, "StoreError", base.ptr());
  py::register_exception<store::UsageError>(m, "UsageError", base.ptr());
  py::register_exception<DecodeError>(m, "DecodeError", base.ptr());

  py::class_<store::SearchReport>(m, "SearchReport")
      .def_readonly("accepted", &store::SearchReport::accepted)
      .def_readonly("reason", &store::SearchReport::reason)
      .def_readonly("tampered", &store::SearchReport::tampered)
      .def_property_readonly("ids",
                             [](const store::SearchReport& r) {
                               std::vector<std::string> out;
                               for (const DocId& id : r.ids) out.push_back(id.hex());
                               return out;
                             })
      .def("__repr__", [](const store::SearchReport& r) {
        return "<SearchReport " + r.reason + " ids=" + std::to_string(r.ids.size()) + ">";
      });

  py::class_<PyStore>(m, "Store")
      .def_static(
          "create",
          [](const std::filesystem::path& dir, bool force, std::optional<std::uint64_t> seed) {
            auto rng = make_rng(seed);
            return PyStore(store::Store::create(dir, force, *rng));
          },
          py::arg("dir"), py::arg("force") = false, py::arg("seed") = py::none())
      .def_static(
          "open", [](const std::filesystem::path& dir) { return PyStore(store::Store::open(dir)); },
          py::arg("dir"))
      .def_property_readonly("dir", &PyStore::dir)
      .def("close", &PyStore::close)
      .def("__enter__", [](PyStore& s) -> PyStore& { return s; })
      .def("__exit__", [](PyStore& s, py::args) { s.close(); })
      .def(
          "build",
          [](PyStore& s, const std::string& corpus, std::optional<std::uint64_t> seed) {
            std::istringstream in(corpus);
            PlainDb db = store::parse_corpus(in);
            auto rng = make_rng(seed);
            store::build(s.get(), db, *rng);
            return db.pair_count();
          },
          py::arg("corpus"), py::arg("seed") = py::none(),
          "Index a keyword<TAB>id,id,... corpus; returns the number of pairs.")
      .def(
          "search",
          [](PyStore& s, const std::string& w, const std::string& scheme,
             const std::string& adversary, std::uint64_t seed) {
            if (scheme != "static" && scheme != "forward") {
              throw InputError("scheme must be 'static' or 'forward'");
            }
            sim::AdversaryStrategy adv;
            adv.name = sim::strategy_from_string(adversary);
            adv.seed = seed;
            return store::search(s.get(), Keyword(w),
                                 scheme == "static" ? store::Scheme::kStatic : store::Scheme::kForward,
                                 adv);
          },
          py::arg("keyword"), py::arg("scheme") = "forward", py::arg("adversary") = "HONEST",
          py::arg("seed") = 0)
      .def(
          "add",
          [](PyStore& s, const std::string& id, const std::vector<std::string>& kws,
             std::optional<std::uint64_t> seed) {
            auto rng = make_rng(seed);
            store::update(s.get(), store::Structure::kAdd, DocId::from_hex(id), keywords(kws), *rng);
          },
          py::arg("id"), py::arg("keywords"), py::arg("seed") = py::none())
      .def(
          "delete",
          [](PyStore& s, const std::string& id, const std::vector<std::string>& kws,
             std::optional<std::uint64_t> seed) {
            auto rng = make_rng(seed);
            store::update(s.get(), store::Structure::kDel, DocId::from_hex(id), keywords(kws), *rng);
          },
          py::arg("id"), py::arg("keywords"), py::arg("seed") = py::none())
      .def(
          "soundness",
          [](PyStore& s, std::uint64_t trials, std::optional<std::uint64_t> seed) {
            auto rng = make_rng(seed);
            return report_dict(store::soundness(s.get(), trials, *rng));
          },
          py::arg("trials") = 100, py::arg("seed") = py::none());

  m.def(
      "soundness_suite",
      [](std::uint64_t trials, std::uint64_t seed) {
        SeededRandom rng(seed);
        return report_dict(sim::soundness_suite(trials, rng));
      },
      py::arg("trials") = 100, py::arg("seed") = 0,
      "In-memory soundness game: per-strategy tallies keyed by strategy name.");

  m.def(
      "bench",
      [](const std::vector<std::size_t>& sizes, std::size_t reps, std::uint64_t seed) {
        SeededRandom rng(seed);
        py::list rows;
        for (const auto& r : bench::run_bench(sizes, reps, rng)) {
          py::dict d;
          d["result_size"] = r.result_size;
          d["owner_us"] = r.owner_us;
          d["cloud_us"] = r.cloud_us;
          d["auditor_us"] = r.auditor_us;
          d["proof_bytes"] = r.proof_bytes;
          d["tsig_entries"] = r.tsig_entries;
          d["owner_ops"] = ops_dict(r.owner_ops);
          d["cloud_ops"] = ops_dict(r.cloud_ops);
          d["auditor_ops"] = ops_dict(r.auditor_ops);
          rows.append(d);
        }
        return rows;
      },
      py::arg("sizes") = std::vector<std::size_t>{1, 10, 100}, py::arg("reps") = 5,
      py::arg("seed") = 0);

  m.def("strategies", [] {
    std::vector<std::string> out = {sim::to_string(sim::Strategy::kHonest)};
    for (sim::Strategy s : sim::tampering_strategies()) out.push_back(sim::to_string(s));
    return out;
  });

  m.def(
      "hash_to_scalar", [](py::bytes msg) {
        std::string s = msg;
        return to_py(crypto::hash_to_scalar(as_bytes(s)).to_bytes());
      },
      py::arg("msg"));
  m.def(
      "prf",
      [](py::bytes key, py::bytes msg) {
        std::string k = key, s = msg;
        if (k.size() != crypto::SymKey::kSize) throw InputError("prf key must be 32 bytes");
        crypto::SymKey sk;
        std::copy(k.begin(), k.end(), sk.bytes.begin());
        return to_py(crypto::prf(sk, as_bytes(s)));
      },
      py::arg("key"), py::arg("msg"));
}
