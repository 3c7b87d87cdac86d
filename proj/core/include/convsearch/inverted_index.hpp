#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convsearch/types.hpp"

namespace convsearch {

// Okapi BM25 parameters. k1 saturates term frequency, b scales document
// length normalization.
struct BM25Params {
  double k1 = 0.82;
  double b = 0.68;

  void validate() const;  // k1 >= 0, 0 <= b <= 1
};

struct Posting {
  std::uint32_t doc = 0;  // ordinal into docids()/doc_lengths()
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

// Immutable BM25 inverted index. Postings are keyed by term in sorted order
// and hold doc ordinals ascending, which keeps serialization byte-stable.
class InvertedIndex {
 public:
  const std::map<std::string, std::vector<Posting>>& postings() const {
    return postings_;
  }
  const std::vector<std::string>& docids() const { return docids_; }
  const std::vector<std::uint32_t>& doc_lengths() const { return doc_lengths_; }
  const BM25Params& params() const { return params_; }
  std::size_t doc_count() const { return docids_.size(); }
  double avg_doc_len() const { return avg_doc_len_; }

  friend InvertedIndex build_index(const Corpus& corpus, BM25Params params);
  friend InvertedIndex load_index(const std::string& path);

 private:
  std::map<std::string, std::vector<Posting>> postings_;
  std::vector<std::string> docids_;
  std::vector<std::uint32_t> doc_lengths_;
  BM25Params params_;
  double avg_doc_len_ = 0.0;
};

InvertedIndex build_index(const Corpus& corpus, BM25Params params = {});

// BM25 score of one document against a tokenized query:
//   sum over query tokens of idf(t) * tf*(k1+1) / (tf + k1*(1-b+b*dl/avgdl))
// with idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)). Repeated query tokens
// contribute once per occurrence; absent terms contribute 0.
double bm25_score(const InvertedIndex& index,
                  std::span<const std::string> query_tokens, std::uint32_t doc);

// Top-`depth` documents by BM25 score, descending. Documents with no
// query-term overlap are excluded; ties break by ascending docid. A query
// that tokenizes to nothing yields an empty list.
RankedList retrieve(const InvertedIndex& index, std::string_view query,
                    std::size_t depth, std::string query_id = "q");

// Versioned little-endian binary serialization (layout in docs/formats.md).
void save_index(const InvertedIndex& index, const std::string& path);
InvertedIndex load_index(const std::string& path);

}  // namespace convsearch
