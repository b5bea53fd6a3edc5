#include "vsse/types.hpp"

#include <algorithm>

#include "vsse/errors.hpp"

namespace vsse {

DocId DocId::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kSize) {
    throw InputError("document id must be " + std::to_string(2 * kSize) +
                     " hex characters: '" + std::string(hex) + "'");
  }
  DocId id;
  try {
    id.bytes = array_from_hex<kSize>(hex);
  } catch (const std::invalid_argument&) {
    throw InputError("document id is not hex: '" + std::string(hex) + "'");
  }
  return id;
}

DocId DocId::from_u64(std::uint64_t v) {
  DocId id;
  ByteArray<8> low = be64(v);
  std::copy(low.begin(), low.end(), id.bytes.begin() + 8);
  return id;
}

Keyword::Keyword(std::string text) : text_(std::move(text)) {
  if (text_.empty() || text_.size() > kMaxSize) {
    throw InputError("keyword must be 1.." + std::to_string(kMaxSize) +
                     " bytes, got " + std::to_string(text_.size()));
  }
}

void PlainDb::add(const Keyword& w, const DocId& id) {
  Postings& list = map_[w];
  if (std::find(list.begin(), list.end(), id) != list.end()) {
    throw InputError("duplicate pair (" + w.text() + ", " + id.hex() + ")");
  }
  list.push_back(id);
}

void PlainDb::add_all(const Keyword& w, const Postings& ids) {
  for (const DocId& id : ids) add(w, id);
}

const PlainDb::Postings& PlainDb::postings(const Keyword& w) const {
  static const Postings kEmpty;
  auto it = map_.find(w);
  return it == map_.end() ? kEmpty : it->second;
}

std::size_t PlainDb::pair_count() const {
  std::size_t n = 0;
  for (const auto& [w, ids] : map_) n += ids.size();
  return n;
}

bool PlainDb::contains(const Keyword& w, const DocId& id) const {
  const Postings& list = postings(w);
  return std::find(list.begin(), list.end(), id) != list.end();
}

}  // namespace vsse
