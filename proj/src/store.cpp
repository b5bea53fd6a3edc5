#include "vsse/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>

namespace vsse::store {

using crypto::G1Element;
using crypto::G2Element;
using crypto::Scalar;
using crypto::SymKey;
using sim::Reason;

namespace {

constexpr std::string_view kMagicKeys = "VKEY";
constexpr std::string_view kMagicOwner = "VOWN";
constexpr std::string_view kMagicIndex = "VIDX";
constexpr std::string_view kMagicTsig = "VSIG";
constexpr std::string_view kMagicPk = "VAPK";
constexpr std::string_view kMagicHistory = "VHIS";

ByteWriter header(std::string_view magic) {
  ByteWriter w;
  w.raw(as_bytes(magic));
  w.u8(kFormatVersion);
  return w;
}

// Runs decode over the body after checking magic and version; every decode
// failure becomes a StoreError naming the file kind.
template <typename F>
auto decode_file(ByteView data, std::string_view magic, F&& body) {
  try {
    ByteReader r(data);
    ByteView m = r.raw(magic.size());
    if (!std::equal(m.begin(), m.end(), magic.begin(), magic.end(),
                    [](std::uint8_t a, char b) {
                      return a == static_cast<std::uint8_t>(b);
                    })) {
      throw StoreError("bad magic, expected " + std::string(magic));
    }
    const std::uint8_t version = r.u8();
    if (version != kFormatVersion) {
      throw StoreError(std::string(magic) + " file has unsupported version " +
                       std::to_string(version));
    }
    auto out = body(r);
    r.expect_done();
    return out;
  } catch (const StoreError&) {
    throw;
  } catch (const Error& e) {
    throw StoreError(std::string(magic) + " file: " + e.what());
  }
}

void put_key(ByteWriter& w, const SymKey& k) { w.raw(k.bytes); }
SymKey get_key(ByteReader& r) { return SymKey{r.array<32>()}; }

void put_states(ByteWriter& w, const std::map<Keyword, sse::KeywordState>& m) {
  w.u32(static_cast<std::uint32_t>(m.size()));
  for (const auto& [kw, st] : m) {
    w.str(kw.text());
    w.u64(st.counter);
    w.raw(st.head);
  }
}

std::map<Keyword, sse::KeywordState> get_states(ByteReader& r) {
  std::map<Keyword, sse::KeywordState> m;
  const std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    Keyword kw(r.str());
    sse::KeywordState st;
    st.counter = r.u64();
    st.head = r.array<32>();
    m[kw] = st;
  }
  return m;
}

void put_ids(ByteWriter& w, const auto& ids) {
  w.u32(static_cast<std::uint32_t>(ids.size()));
  for (const DocId& id : ids) w.raw(id.bytes);
}

std::vector<DocId> get_ids(ByteReader& r) {
  std::vector<DocId> out(r.u32());
  for (DocId& id : out) id.bytes = r.array<DocId::kSize>();
  return out;
}

void write_file(const fs::path& path, const Bytes& data) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("missing store file " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

template <typename F>
auto load(const fs::path& path, F&& decode) {
  try {
    return decode(read_file(path));
  } catch (const StoreError& e) {
    throw StoreError(path.string() + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PairRegistry

bool PairRegistry::is_added(const Keyword& w, const DocId& id) const {
  auto it = added.find(w);
  return it != added.end() &&
         std::find(it->second.begin(), it->second.end(), id) != it->second.end();
}

bool PairRegistry::is_live(const Keyword& w, const DocId& id) const {
  if (!is_added(w, id)) return false;
  auto it = deleted.find(w);
  return it == deleted.end() || it->second.count(id) == 0;
}

std::vector<DocId> PairRegistry::live_postings(const Keyword& w) const {
  std::vector<DocId> out;
  auto it = added.find(w);
  if (it == added.end()) return out;
  for (const DocId& id : it->second) {
    if (is_live(w, id)) out.push_back(id);
  }
  return out;
}

PlainDb PairRegistry::live() const {
  PlainDb db;
  for (const auto& [w, ids] : added) db.add_all(w, live_postings(w));
  return db;
}

std::size_t PairRegistry::added_pairs() const {
  std::size_t n = 0;
  for (const auto& [w, ids] : added) n += ids.size();
  return n;
}

std::size_t PairRegistry::deleted_pairs() const {
  std::size_t n = 0;
  for (const auto& [w, ids] : deleted) n += ids.size();
  return n;
}

// ---------------------------------------------------------------------------
// Codecs

Bytes encode_keys(const OwnerKeys& k) {
  ByteWriter w = header(kMagicKeys);
  put_key(w, k.statik.base_key);
  put_key(w, k.statik.tag_master);
  put_key(w, k.forward.base_key);
  w.raw(k.forward.bls.sk.to_bytes());
  put_key(w, k.forward.seed_master);
  put_key(w, k.forward.tag_master);
  return std::move(w).take();
}

OwnerKeys decode_keys(ByteView data) {
  return decode_file(data, kMagicKeys, [](ByteReader& r) {
    OwnerKeys k;
    k.statik.base_key = get_key(r);
    k.statik.tag_master = get_key(r);
    k.forward.base_key = get_key(r);
    k.forward.bls =
        crypto::bls_keypair_from_secret(Scalar::from_bytes(r.raw(Scalar::kSize)));
    k.forward.seed_master = get_key(r);
    k.forward.tag_master = get_key(r);
    return k;
  });
}

Bytes encode_owner_state(const OwnerState& s) {
  ByteWriter w = header(kMagicOwner);
  put_states(w, s.forward.add);
  put_states(w, s.forward.del);
  w.u32(static_cast<std::uint32_t>(s.static_counts.size()));
  for (const auto& [kw, c] : s.static_counts) {
    w.str(kw.text());
    w.u64(c);
  }
  w.u32(static_cast<std::uint32_t>(s.registry.added.size()));
  for (const auto& [kw, ids] : s.registry.added) {
    w.str(kw.text());
    put_ids(w, ids);
    auto d = s.registry.deleted.find(kw);
    put_ids(w, d == s.registry.deleted.end() ? std::set<DocId>{} : d->second);
  }
  return std::move(w).take();
}

OwnerState decode_owner_state(ByteView data) {
  return decode_file(data, kMagicOwner, [](ByteReader& r) {
    OwnerState s;
    s.forward.add = get_states(r);
    s.forward.del = get_states(r);
    const std::uint32_t nc = r.u32();
    for (std::uint32_t i = 0; i < nc; ++i) {
      Keyword kw(r.str());
      s.static_counts[kw] = r.u64();
    }
    const std::uint32_t nr = r.u32();
    for (std::uint32_t i = 0; i < nr; ++i) {
      Keyword kw(r.str());
      s.registry.added[kw] = get_ids(r);
      std::vector<DocId> del = get_ids(r);
      if (!del.empty()) s.registry.deleted[kw] = {del.begin(), del.end()};
    }
    return s;
  });
}

Bytes encode_index_file(const sse::EncryptedIndex& index) {
  ByteWriter w = header(kMagicIndex);
  w.u64(index.size());
  for (const auto& [loc, value] : index.sorted_entries()) {
    w.raw(loc);
    w.u16(static_cast<std::uint16_t>(value.size()));
    w.raw(value);
  }
  return std::move(w).take();
}

sse::EncryptedIndex decode_index_file(ByteView data) {
  return decode_file(data, kMagicIndex, [](ByteReader& r) {
    sse::EncryptedIndex index;
    const std::uint64_t n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
      Block32 loc = r.array<32>();
      ByteView v = r.raw(r.u16());
      index.insert(loc, Bytes(v.begin(), v.end()));
    }
    return index;
  });
}

Bytes encode_tsig_file(const vforward::SignatureTable& t) {
  ByteWriter w = header(kMagicTsig);
  w.u64(t.size());
  for (const auto& [pos, sigma] : t.sorted_entries()) {
    w.raw(pos);
    w.raw(sigma.to_bytes());
  }
  return std::move(w).take();
}

vforward::SignatureTable decode_tsig_file(ByteView data) {
  return decode_file(data, kMagicTsig, [](ByteReader& r) {
    vforward::SignatureTable t;
    const std::uint64_t n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
      Block32 pos = r.array<32>();
      t.insert(pos, G1Element::from_bytes(r.raw(G1Element::kSize)));
    }
    return t;
  });
}

Bytes encode_pk_file(const G2Element& pk) {
  ByteWriter w = header(kMagicPk);
  w.raw(pk.to_bytes());
  return std::move(w).take();
}

G2Element decode_pk_file(ByteView data) {
  return decode_file(data, kMagicPk, [](ByteReader& r) {
    return G2Element::from_bytes(r.raw(G2Element::kSize));
  });
}

Bytes encode_history_file(const std::map<Block32, sim::CachedAnswer>& h,
                          const StaticHistory& s) {
  ByteWriter w = header(kMagicHistory);
  w.blob(sim::encode_history(h));
  w.u32(static_cast<std::uint32_t>(s.answers.size()));
  for (const auto& [key, blocks] : s.answers) {
    w.raw(key);
    w.u32(static_cast<std::uint32_t>(blocks.size()));
    for (const Block32& b : blocks) w.raw(b);
  }
  return std::move(w).take();
}

void decode_history_file(ByteView data, std::map<Block32, sim::CachedAnswer>& h,
                         StaticHistory& s) {
  auto [fh, fs] = decode_file(data, kMagicHistory, [](ByteReader& r) {
    Bytes fwd = r.blob();
    auto hist = sim::decode_history(fwd);
    StaticHistory st;
    const std::uint32_t n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
      Block32 key = r.array<32>();
      std::vector<Block32> blocks(r.u32());
      for (Block32& b : blocks) b = r.array<32>();
      st.answers[key] = std::move(blocks);
    }
    return std::make_pair(std::move(hist), std::move(st));
  });
  h = std::move(fh);
  s = std::move(fs);
}

// ---------------------------------------------------------------------------
// Store

namespace {

const char* const kOwnerDir = "owner";
const char* const kCloudDir = "cloud";
const char* const kAuditorDir = "auditor";

int acquire_lock(const fs::path& dir) {
  const fs::path lock = dir / "lock";
  int fd = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
  if (fd < 0) {
    throw UsageError("cannot open lock file " + lock.string() + ": " +
                     std::strerror(errno));
  }
  if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd);
    throw UsageError("store " + dir.string() + " is in use by another command");
  }
  return fd;
}

}  // namespace

Store Store::create(const fs::path& dir, bool force, RandomSource& rng) {
  std::error_code ec;
  if (fs::exists(dir, ec) && !fs::is_empty(dir, ec) && !force) {
    throw UsageError(dir.string() + " exists and is not empty (use --force)");
  }
  fs::create_directories(dir);
  Store s(dir, acquire_lock(dir));
  for (const char* sub : {kOwnerDir, kCloudDir, kAuditorDir}) {
    fs::remove_all(dir / sub);
    fs::create_directories(dir / sub);
  }
  OwnerKeys keys{vstatic::vs_keygen(rng), vforward::vf_keygen(rng)};
  write_file(dir / kOwnerDir / "keys.bin", encode_keys(keys));
  write_file(dir / kAuditorDir / "pk.bin", encode_pk_file(keys.forward.bls.pk));
  s.save_owner({});
  s.save_cloud({});
  return s;
}

Store Store::open(const fs::path& dir) {
  if (!fs::is_regular_file(dir / kOwnerDir / "keys.bin")) {
    throw UsageError(dir.string() + " is not a store (run keygen first)");
  }
  return Store(dir, acquire_lock(dir));
}

Store::Store(Store&& o) noexcept
    : dir_(std::move(o.dir_)), lock_fd_(std::exchange(o.lock_fd_, -1)) {}

Store::~Store() {
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

OwnerKeys Store::load_keys() const {
  return load(dir_ / kOwnerDir / "keys.bin", decode_keys);
}

OwnerState Store::load_owner() const {
  return load(dir_ / kOwnerDir / "state.bin", decode_owner_state);
}

void Store::save_owner(const OwnerState& s) const {
  write_file(dir_ / kOwnerDir / "state.bin", encode_owner_state(s));
}

CloudFiles Store::load_cloud() const {
  const fs::path c = dir_ / kCloudDir;
  CloudFiles out;
  out.static_index = load(c / "static.bin", decode_index_file);
  out.forward.index = load(c / "index.bin", decode_index_file);
  out.forward.tsig = load(c / "tsig.bin", decode_tsig_file);
  out.forward.del_index = load(c / "del_index.bin", decode_index_file);
  out.forward.del_tsig = load(c / "del_tsig.bin", decode_tsig_file);
  load(c / "history.bin", [&](ByteView data) {
    decode_history_file(data, out.history, out.static_history);
    return 0;
  });
  return out;
}

void Store::save_cloud(const CloudFiles& cf) const {
  const fs::path c = dir_ / kCloudDir;
  write_file(c / "static.bin", encode_index_file(cf.static_index));
  write_file(c / "index.bin", encode_index_file(cf.forward.index));
  write_file(c / "tsig.bin", encode_tsig_file(cf.forward.tsig));
  write_file(c / "del_index.bin", encode_index_file(cf.forward.del_index));
  write_file(c / "del_tsig.bin", encode_tsig_file(cf.forward.del_tsig));
  save_history(cf);
}

void Store::save_history(const CloudFiles& cf) const {
  write_file(dir_ / kCloudDir / "history.bin",
             encode_history_file(cf.history, cf.static_history));
}

G2Element Store::load_pk() const {
  return load(dir_ / kAuditorDir / "pk.bin", decode_pk_file);
}

// ---------------------------------------------------------------------------
// Corpus

PlainDb parse_corpus(std::istream& in) {
  PlainDb db;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError(where + "expected keyword, TAB, ids");
    }
    try {
      Keyword w(line.substr(0, tab));
      std::stringstream ids(line.substr(tab + 1));
      std::string hex;
      std::size_t n = 0;
      while (std::getline(ids, hex, ',')) {
        if (hex.size() != 2 * DocId::kSize) {
          throw InputError("id '" + hex + "' is not 32 hex digits");
        }
        db.add(w, DocId::from_hex(hex));
        ++n;
      }
      if (n == 0) throw InputError("no ids for keyword '" + w.text() + "'");
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  return db;
}

// ---------------------------------------------------------------------------
// Operations

void build(Store& store, const PlainDb& db, RandomSource& rng) {
  const OwnerKeys keys = store.load_keys();
  OwnerState owner;
  CloudFiles cloud;
  vstatic::StaticBuild sb = vstatic::vs_build(keys.statik, db, rng);
  owner.static_counts = std::move(sb.counts);
  cloud.static_index = std::move(sb.index);
  vforward::ForwardBuild fb = vforward::vf_build(keys.forward, db, rng);
  owner.forward = std::move(fb.owner);
  cloud.forward = std::move(fb.cloud);
  for (const auto& [w, ids] : db) owner.registry.added[w] = ids;
  store.save_cloud(cloud);
  store.save_owner(owner);
}

namespace {

bool tamper_static(const sim::AdversaryStrategy& adv, SeededRandom& rng,
                   const sse::StaticToken& token, std::vector<Block32>& blocks,
                   const StaticHistory& history) {
  switch (adv.name) {
    case sim::Strategy::kHonest:
      return false;
    case sim::Strategy::kDropOne:
      if (blocks.empty()) return false;
      blocks.erase(blocks.begin() +
                   static_cast<std::ptrdiff_t>(rng.uniform(blocks.size())));
      return true;
    case sim::Strategy::kFlipIdBit: {
      if (blocks.size() < 2) return false;
      const std::size_t k = rng.uniform(blocks.size() - 1);
      const std::size_t bit = rng.uniform(DocId::kSize * 8);
      blocks[k][bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      return true;
    }
    case sim::Strategy::kForgeProof:
      if (blocks.empty()) {
        blocks.push_back(rng.bytes<32>());
      } else {
        blocks.back() = rng.bytes<32>();
      }
      return true;
    case sim::Strategy::kReplayOtherKeyword: {
      const std::vector<Block32>* best = nullptr;
      for (const auto& [key, b] : history.answers) {
        if (key == token.location_key || b == blocks) continue;
        if (best == nullptr ||
            (b.size() == blocks.size() && best->size() != blocks.size())) {
          best = &b;
        }
      }
      if (best == nullptr) return false;
      blocks = *best;
      return true;
    }
    case sim::Strategy::kStaleIgnoreUpdate: {
      auto it = history.answers.find(token.location_key);
      if (it != history.answers.end() && it->second != blocks) {
        blocks = it->second;
        return true;
      }
      if (blocks.size() < 2) return false;
      blocks.erase(blocks.end() - 2);
      return true;
    }
  }
  return false;
}

SearchReport search_static(Store& store, const Keyword& w,
                           const sim::AdversaryStrategy& adv) {
  const OwnerKeys keys = store.load_keys();
  const OwnerState owner = store.load_owner();
  CloudFiles cloud = store.load_cloud();

  const sse::StaticToken token =
      vstatic::vs_search_token(keys.statik, owner.static_counts, w);
  SearchReport out;
  std::vector<Block32> blocks;
  try {
    blocks = sse::static_search_blocks(cloud.static_index, token);
  } catch (const IncompleteIndexError&) {
    out.reason = vstatic::to_string(vstatic::StaticReason::kIncompleteIndex);
    return out;
  }
  std::vector<Block32> honest = blocks;
  SeededRandom rng(adv.seed);
  out.tampered = tamper_static(adv, rng, token, blocks, cloud.static_history);
  if (token.count != 0) {
    cloud.static_history.answers[token.location_key] = std::move(honest);
    store.save_history(cloud);
  }

  vstatic::StaticVerdict v = vstatic::vs_verify(keys.statik, w, token, blocks);
  out.accepted = v.accepted();
  out.reason = vstatic::to_string(v.reason);
  out.ids = std::move(v.ids);
  return out;
}

struct ForwardRun {
  Reason reason = Reason::kAccept;
  std::vector<DocId> ids;
  bool tampered = false;
};

// Owner issues the request, the cloud answers, the owner checks counts and
// aggregates, the auditor decides with pk alone.
ForwardRun run_forward(const vforward::ForwardVKeys& keys,
                       const vforward::ForwardOwnerState& owner,
                       const G2Element& pk, sim::AdversarialCloud& cloud,
                       const Keyword& w) {
  sim::SearchRequestPayload req{
      vforward::vf_search_token(keys, w, owner, Structure::kAdd),
      vforward::vf_search_token(keys, w, owner, Structure::kDel)};
  sim::AdversarialCloud::Response resp = cloud.search(req, 0);

  auto judge = [&](Structure s, const sim::StructureResult& r,
                   const G1Element& pf_c) {
    if (r.status != Reason::kAccept) return r.status;
    vforward::OwnerProof p = vforward::vf_owner_proof(
        keys, w, s, r.hits, owner.state(w, s).counter);
    if (!p.ok()) return p.status;
    return vforward::vf_audit(pk, p.pf_o, pf_c) ? Reason::kAccept
                                                : Reason::kPairingFail;
  };
  ForwardRun out;
  out.tampered = resp.tampered;
  const Reason add = judge(Structure::kAdd, resp.result.add, resp.proof.add);
  const Reason del = judge(Structure::kDel, resp.result.del, resp.proof.del);
  out.reason = add != Reason::kAccept ? add : del;
  if (out.reason == Reason::kAccept) {
    out.ids = vforward::set_difference_ordered(resp.result.add.hits,
                                               resp.result.del.hits);
  }
  return out;
}

}  // namespace

SearchReport search(Store& store, const Keyword& w, Scheme scheme,
                    const sim::AdversaryStrategy& adversary) {
  if (scheme == Scheme::kStatic) return search_static(store, w, adversary);

  const OwnerKeys keys = store.load_keys();
  const OwnerState owner = store.load_owner();
  const G2Element pk = store.load_pk();
  CloudFiles files = store.load_cloud();

  sim::AdversaryStrategy adv = adversary;
  adv.rollback = true;
  sim::AdversarialCloud cloud(adv, std::move(files.forward));
  cloud.set_history(std::move(files.history));
  ForwardRun run = run_forward(keys.forward, owner.forward, pk, cloud, w);
  files.history = cloud.history();
  store.save_history(files);

  SearchReport out;
  out.accepted = run.reason == Reason::kAccept;
  out.reason = vforward::to_string(run.reason);
  out.ids = std::move(run.ids);
  out.tampered = run.tampered;
  return out;
}

void update(Store& store, Structure op, const DocId& id,
            const std::vector<Keyword>& kws, RandomSource& rng) {
  const OwnerKeys keys = store.load_keys();
  OwnerState owner = store.load_owner();
  for (const Keyword& w : kws) {
    if (op == Structure::kAdd && owner.registry.is_added(w, id)) {
      throw InputError("pair (" + w.text() + ", " + id.hex() +
                       ") was already added");
    }
    if (op == Structure::kDel && !owner.registry.is_live(w, id)) {
      throw InputError("pair (" + w.text() + ", " + id.hex() +
                       ") is not in the index");
    }
  }
  CloudFiles cloud = store.load_cloud();
  vforward::FwdUpdateToken token =
      vforward::vf_update_token(keys.forward, id, kws, op, owner.forward, rng);
  vforward::vf_apply_update(cloud.forward, token);
  for (const Keyword& w : kws) {
    if (op == Structure::kAdd) {
      owner.registry.added[w].push_back(id);
    } else {
      owner.registry.deleted[w].insert(id);
    }
  }
  // The static scheme has no update algorithm; its index is rebuilt from the
  // live pairs.
  vstatic::StaticBuild sb =
      vstatic::vs_build(keys.statik, owner.registry.live(), rng);
  owner.static_counts = std::move(sb.counts);
  cloud.static_index = std::move(sb.index);
  store.save_cloud(cloud);
  store.save_owner(owner);
}

sim::SoundnessReport soundness(Store& store, std::uint64_t trials,
                               RandomSource& rng) {
  if (trials == 0) throw InputError("soundness needs at least one trial");
  const OwnerKeys keys = store.load_keys();
  const OwnerState owner = store.load_owner();
  const G2Element pk = store.load_pk();
  const CloudFiles files = store.load_cloud();

  std::vector<Keyword> kws;
  for (const auto& [w, ids] : owner.registry.added) kws.push_back(w);
  kws.emplace_back("\x01not-indexed");

  std::vector<sim::Strategy> arms = {sim::Strategy::kHonest};
  for (sim::Strategy s : sim::tampering_strategies()) arms.push_back(s);

  sim::SoundnessReport report;
  for (sim::Strategy s : arms) {
    sim::StrategyTally& tally = report.tallies[s];
    for (std::uint64_t k = 0; k < trials; ++k) {
      sim::AdversaryStrategy adv{
          s, rng.next_u64(),
          rng.uniform(4) == 0 ? Structure::kDel : Structure::kAdd, true};
      sim::AdversarialCloud cloud(adv, files.forward);
      cloud.set_history(files.history);
      ++tally.sessions;
      bool any = false;
      for (int q = 0; q < 3; ++q) {
        const Keyword& w = kws[rng.uniform(kws.size())];
        ForwardRun run = run_forward(keys.forward, owner.forward, pk, cloud, w);
        ++tally.searches;
        ++tally.reasons[vforward::to_string(run.reason)];
        any |= run.tampered;
        tally.tampered_searches += run.tampered;
        if (run.reason == Reason::kAccept) {
          ++tally.accepted;
          if (run.tampered || run.ids != owner.registry.live_postings(w)) {
            ++tally.accepted_forgeries;
          }
        }
      }
      if (!any) ++tally.vacuous_sessions;
    }
  }
  return report;
}

}  // namespace vsse::store
