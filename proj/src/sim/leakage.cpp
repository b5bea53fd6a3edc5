#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_set>

#include "vsse/errors.hpp"
#include "vsse/sim.hpp"

namespace vsse::sim {

namespace {

enum class Format { kCount, kHex32, kHex48, kIdIndex, kStructure };

struct FieldSpec {
  const char* term;
  Format format;
  bool single;
};

// Everything the cloud may observe, per operation. Search fields appear once
// per structure under an "add." or "del." prefix.
const std::map<std::string, std::map<std::string, FieldSpec>>& schema() {
  static const std::map<std::string, std::map<std::string, FieldSpec>> s = {
      {"build",
       {{"index_entries", {"L_bld.sigma_f", Format::kCount, true}},
        {"del_index_entries", {"L_bld.sigma_f", Format::kCount, true}},
        {"tsig_entries", {"L_bld.tsig_size", Format::kCount, true}},
        {"del_tsig_entries", {"L_bld.tsig_size", Format::kCount, true}}}},
      {"search",
       {{"chain_head", {"L_srch.sigma_f", Format::kHex32, true}},
        {"count", {"L_srch.sigma_f", Format::kCount, true}},
        {"tag", {"L_srch.pairs", Format::kHex32, true}},
        {"results", {"L_srch.pairs", Format::kIdIndex, false}},
        {"positions", {"L_srch.pairs", Format::kHex32, false}},
        {"signatures", {"L_srch.pairs", Format::kHex48, false}}}},
      {"update",
       {{"doc_name", {"L_updt.id", Format::kHex32, true}},
        {"structure", {"L_updt.structure", Format::kStructure, true}},
        {"chain_locations", {"L_updt.sigma_f", Format::kHex32, false}},
        {"chain_entries", {"L_updt.sigma_f", Format::kHex48, false}},
        {"positions", {"L_updt.pairs", Format::kHex32, false}},
        {"signatures", {"L_updt.pairs", Format::kHex48, false}}}},
  };
  return s;
}

bool is_hex(std::string_view s, std::size_t len) {
  return s.size() == len && std::all_of(s.begin(), s.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c)) ||
                  (c >= 'a' && c <= 'f');
         });
}

bool is_count(std::string_view s) {
  return !s.empty() && s.size() <= 20 &&
         std::all_of(s.begin(), s.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c));
         });
}

bool matches(Format f, const std::string& v) {
  switch (f) {
    case Format::kCount: return is_count(v);
    case Format::kHex32: return is_hex(v, 64);
    case Format::kHex48: return is_hex(v, 96);
    case Format::kIdIndex: {
      const auto colon = v.find(':');
      return colon != std::string::npos &&
             is_hex(std::string_view(v).substr(0, colon), 2 * DocId::kSize) &&
             is_count(std::string_view(v).substr(colon + 1));
    }
    case Format::kStructure: return v == "add" || v == "del";
  }
  return false;
}

LeakageAuditResult fail(std::string field, std::string detail) {
  LeakageAuditResult r;
  r.pass = false;
  r.field = std::move(field);
  r.detail = std::move(detail);
  return r;
}

const LeakageField* find_field(const LeakageRecord& r, const std::string& name) {
  for (const LeakageField& f : r.fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

// Candidate positions the cloud could compute from what searches revealed:
// every revealed tag crossed with every revealed id and every index up to
// the tag's revealed count plus the number of updates since.
class Recomputer {
 public:
  void reveal_id(const DocId& id) {
    if (seen_ids_.insert(id).second) ids_.push_back(id);
  }

  void reveal_tag(const Block32& tag, std::uint64_t count) {
    TagState& st = tags_[tag];
    st.count = count;
    st.updates_since = 0;
    extend(tag, st);
  }

  void on_update() {
    for (auto& [tag, st] : tags_) {
      ++st.updates_since;
      extend(tag, st);
    }
  }

  void sync() {
    for (auto& [tag, st] : tags_) extend(tag, st);
  }

  bool contains(const Block32& pos) const { return candidates_.count(pos) != 0; }
  std::uint64_t checked() const { return checked_; }

 private:
  struct TagState {
    std::uint64_t count = 0;
    std::uint64_t updates_since = 0;
    std::size_t ids_done = 0;
    std::uint64_t hi_done = 0;
  };

  void extend(const Block32& tag, TagState& st) {
    const std::uint64_t hi = std::max(st.hi_done, st.count + st.updates_since);
    for (std::size_t k = 0; k < ids_.size(); ++k) {
      const std::uint64_t from = k < st.ids_done ? st.hi_done + 1 : 1;
      for (std::uint64_t i = from; i <= hi; ++i) {
        candidates_.insert(vforward::position(tag, ids_[k], i));
        ++checked_;
      }
    }
    st.ids_done = ids_.size();
    st.hi_done = hi;
  }

  std::vector<DocId> ids_;
  std::set<DocId> seen_ids_;
  std::map<Block32, TagState> tags_;
  std::unordered_set<Block32, Block32Hash> candidates_;
  std::uint64_t checked_ = 0;
};

}  // namespace

LeakageAuditResult leakage_audit(const Transcript& t) {
  // Structural typing: every observed value must belong to a known field of
  // its operation, under that field's leakage term and value format.
  for (const LeakageRecord& r : t.leakage) {
    auto op = schema().find(r.op);
    if (op == schema().end()) {
      return fail(r.op, "unknown operation '" + r.op + "'");
    }
    std::set<std::string> seen;
    for (const LeakageField& f : r.fields) {
      std::string base = f.name;
      if (r.op == "search") {
        if (base.rfind("add.", 0) == 0 || base.rfind("del.", 0) == 0) {
          base = base.substr(4);
        } else {
          return fail(f.name, "search field without a structure prefix");
        }
      }
      auto spec = op->second.find(base);
      if (spec == op->second.end()) {
        return fail(f.name, "no leakage term covers '" + f.name + "' in " + r.op);
      }
      if (f.term != spec->second.term) {
        return fail(f.name, "typed as '" + f.term + "', expected '" +
                                spec->second.term + "'");
      }
      if (!seen.insert(f.name).second) {
        return fail(f.name, "field repeated in one record");
      }
      if (spec->second.single && f.values.size() != 1) {
        return fail(f.name, "expected exactly one value");
      }
      for (const std::string& v : f.values) {
        if (!matches(spec->second.format, v)) {
          return fail(f.name, "value '" + v + "' does not fit the field type");
        }
      }
    }
  }

  // Forward privacy: no position added by a later ADD update is derivable
  // from tags and ids that searches have revealed.
  LeakageAuditResult out;
  Recomputer rc;
  for (const LeakageRecord& r : t.leakage) {
    if (r.op == "search") {
      for (const char* p : {"add.", "del."}) {
        const std::string prefix = p;
        const LeakageField* tag = find_field(r, prefix + "tag");
        const LeakageField* count = find_field(r, prefix + "count");
        const LeakageField* results = find_field(r, prefix + "results");
        if (results != nullptr) {
          for (const std::string& v : results->values) {
            rc.reveal_id(DocId::from_hex(v.substr(0, v.find(':'))));
          }
        }
        if (tag != nullptr) {
          const std::uint64_t c =
              count != nullptr ? std::stoull(count->values.front()) : 0;
          rc.reveal_tag(array_from_hex<32>(tag->values.front()), c);
        }
      }
      rc.sync();
    } else if (r.op == "update") {
      rc.on_update();
      const LeakageField* structure = find_field(r, "structure");
      const LeakageField* positions = find_field(r, "positions");
      if (structure == nullptr || positions == nullptr ||
          structure->values.front() != "add") {
        continue;
      }
      for (const std::string& v : positions->values) {
        if (rc.contains(array_from_hex<32>(v))) ++out.forward_privacy_matches;
      }
    }
  }
  out.candidates_checked = rc.checked();
  if (out.forward_privacy_matches != 0) {
    out.pass = false;
    out.field = "positions";
    out.detail = std::to_string(out.forward_privacy_matches) +
                 " update position(s) recomputable from revealed tags and ids";
  }
  return out;
}

}  // namespace vsse::sim
