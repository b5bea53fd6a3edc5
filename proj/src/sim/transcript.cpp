#include <sstream>

#include <json.hpp>

#include "vsse/errors.hpp"
#include "vsse/sim.hpp"

namespace vsse::sim {

using nlohmann::json;

namespace {

constexpr int kTranscriptVersion = 1;

MessageKind kind_from_string(const std::string& s) {
  for (int k = 1; k <= 7; ++k) {
    auto kind = static_cast<MessageKind>(k);
    if (to_string(kind) == s) return kind;
  }
  throw DecodeError("unknown message kind '" + s + "'");
}

Party party_from_string(const std::string& s) {
  for (int p = 0; p <= 2; ++p) {
    auto party = static_cast<Party>(p);
    if (to_string(party) == s) return party;
  }
  throw DecodeError("unknown party '" + s + "'");
}

json ids_json(const std::vector<DocId>& ids) {
  json a = json::array();
  for (const DocId& id : ids) a.push_back(id.hex());
  return a;
}

std::vector<DocId> ids_from(const json& a) {
  std::vector<DocId> out;
  for (const auto& v : a) out.push_back(DocId::from_hex(v.get<std::string>()));
  return out;
}

}  // namespace

std::string transcript_to_jsonl(const Transcript& t) {
  std::ostringstream out;
  out << json{{"type", "header"},
              {"version", kTranscriptVersion},
              {"strategy", to_string(t.strategy)}}
             .dump()
      << '\n';
  for (const MessageRecord& m : t.messages) {
    out << json{{"type", "message"},
                {"kind", to_string(m.kind)},
                {"from", to_string(m.from)},
                {"to", to_string(m.to)},
                {"session", m.session},
                {"size", m.payload_size},
                {"sha256", m.payload_sha256}}
               .dump()
        << '\n';
  }
  for (const LeakageRecord& r : t.leakage) {
    json fields = json::array();
    for (const LeakageField& f : r.fields) {
      fields.push_back({{"name", f.name}, {"term", f.term}, {"values", f.values}});
    }
    out << json{{"type", "leakage"},
                {"op", r.op},
                {"session", r.session},
                {"fields", fields}}
               .dump()
        << '\n';
  }
  for (const SearchRecord& s : t.searches) {
    out << json{{"type", "search"},
                {"session", s.session},
                {"keyword", s.keyword},
                {"reason", vforward::to_string(s.reason)},
                {"ids", ids_json(s.ids)},
                {"expected", ids_json(s.expected)},
                {"tampered", s.tampered},
                {"auditor_bytes", s.auditor_bytes}}
               .dump()
        << '\n';
  }
  return out.str();
}

Transcript transcript_from_jsonl(const std::string& text) {
  Transcript t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (j.at("version").get<int>() != kTranscriptVersion) {
          throw DecodeError("unsupported transcript version");
        }
        t.strategy = strategy_from_string(j.at("strategy").get<std::string>());
        header = true;
      } else if (type == "message") {
        t.messages.push_back({kind_from_string(j.at("kind")),
                              party_from_string(j.at("from")),
                              party_from_string(j.at("to")),
                              j.at("session").get<std::uint64_t>(),
                              j.at("size").get<std::size_t>(),
                              j.at("sha256").get<std::string>()});
      } else if (type == "leakage") {
        LeakageRecord r{j.at("op").get<std::string>(),
                        j.at("session").get<std::uint64_t>(),
                        {}};
        for (const auto& f : j.at("fields")) {
          r.fields.push_back({f.at("name").get<std::string>(),
                              f.at("term").get<std::string>(),
                              f.at("values").get<std::vector<std::string>>()});
        }
        t.leakage.push_back(std::move(r));
      } else if (type == "search") {
        SearchRecord s;
        s.session = j.at("session").get<std::uint64_t>();
        s.keyword = j.at("keyword").get<std::string>();
        s.reason = vforward::reason_from_string(j.at("reason"));
        s.ids = ids_from(j.at("ids"));
        s.expected = ids_from(j.at("expected"));
        s.tampered = j.at("tampered").get<bool>();
        s.auditor_bytes = j.at("auditor_bytes").get<std::size_t>();
        t.searches.push_back(std::move(s));
      } else {
        throw DecodeError("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw DecodeError("transcript line " + std::to_string(lineno) + ": " +
                        e.what());
    } catch (const Error& e) {
      throw DecodeError("transcript line " + std::to_string(lineno) + ": " +
                        e.what());
    }
  }
  if (!header) throw DecodeError("transcript has no header line");
  return t;
}

}  // namespace vsse::sim
