#include "convsearch/inverted_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "convsearch/errors.hpp"
#include "convsearch/tokenizer.hpp"

namespace convsearch {

void BM25Params::validate() const {
  if (k1 < 0.0) {
    throw ValidationError("BM25 k1 must be >= 0");
  }
  if (b < 0.0 || b > 1.0) {
    throw ValidationError("BM25 b must be in [0, 1]");
  }
}

InvertedIndex build_index(const Corpus& corpus, BM25Params params) {
  params.validate();
  InvertedIndex index;
  index.params_ = params;
  index.docids_.reserve(corpus.doc_count());
  index.doc_lengths_.reserve(corpus.doc_count());

  for (const Passage& passage : corpus.passages()) {
    const auto doc = static_cast<std::uint32_t>(index.docids_.size());
    const auto tokens = tokenize(passage.text);
    index.docids_.push_back(passage.docid);
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));

    std::unordered_map<std::string, std::uint32_t> tf;
    for (const std::string& token : tokens) {
      ++tf[token];
    }
    for (const auto& [term, count] : tf) {
      index.postings_[term].push_back({doc, count});
    }
  }
  // Docs were visited in order, but unordered_map iteration interleaves
  // terms; re-sort each posting list by ordinal.
  for (auto& [term, postings] : index.postings_) {
    std::sort(postings.begin(), postings.end(),
              [](const Posting& a, const Posting& b) { return a.doc < b.doc; });
  }
  index.avg_doc_len_ = corpus.avg_doc_len();
  return index;
}

namespace {

double idf(std::size_t doc_count, std::size_t df) {
  const double n = static_cast<double>(doc_count);
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double tf_factor(double tf, double dl, const InvertedIndex& index) {
  const BM25Params& p = index.params();
  const double avgdl = index.avg_doc_len();
  const double norm = avgdl > 0.0 ? dl / avgdl : 0.0;
  return tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * norm));
}

}  // namespace

double bm25_score(const InvertedIndex& index,
                  std::span<const std::string> query_tokens, std::uint32_t doc) {
  if (doc >= index.doc_count()) {
    throw ValidationError("document ordinal " + std::to_string(doc) +
                          " out of range");
  }
  double score = 0.0;
  const double dl = static_cast<double>(index.doc_lengths()[doc]);
  for (const std::string& token : query_tokens) {
    auto it = index.postings().find(token);
    if (it == index.postings().end()) {
      continue;
    }
    const auto& postings = it->second;
    auto hit = std::lower_bound(postings.begin(), postings.end(), doc,
                                [](const Posting& p, std::uint32_t d) {
                                  return p.doc < d;
                                });
    if (hit == postings.end() || hit->doc != doc) {
      continue;
    }
    score += idf(index.doc_count(), postings.size()) *
             tf_factor(static_cast<double>(hit->tf), dl, index);
  }
  return score;
}

RankedList retrieve(const InvertedIndex& index, std::string_view query,
                    std::size_t depth, std::string query_id) {
  if (depth < 1) {
    throw ValidationError("retrieval depth must be >= 1");
  }
  RankedList list;
  list.query_id = std::move(query_id);
  const auto tokens = tokenize(query);
  if (tokens.empty()) {
    return list;
  }

  std::unordered_map<std::uint32_t, double> accumulator;
  for (const std::string& token : tokens) {
    auto it = index.postings().find(token);
    if (it == index.postings().end()) {
      continue;
    }
    const double term_idf = idf(index.doc_count(), it->second.size());
    for (const Posting& posting : it->second) {
      accumulator[posting.doc] +=
          term_idf * tf_factor(static_cast<double>(posting.tf),
                               static_cast<double>(index.doc_lengths()[posting.doc]),
                               index);
    }
  }

  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(accumulator.size());
  for (const auto& [doc, score] : accumulator) {
    if (score > 0.0) {
      scored.emplace_back(index.docids()[doc], score);
    }
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) {
      return a.second > b.second;
    }
    return a.first < b.first;
  });
  if (scored.size() > depth) {
    scored.resize(depth);
  }
  return make_ranked_list(std::move(list.query_id), std::move(scored));
}

// Binary layout (little-endian), documented in docs/formats.md:
//   magic "CSIX", u32 version, f64 k1, f64 b, f64 avg_doc_len, u64 doc_count,
//   per doc: u32 docid length + bytes, u32 doc length;
//   u64 term count, per term: u32 term length + bytes, u64 posting count,
//   per posting: u32 doc ordinal, u32 tf.
namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', 'X'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(value));
  if (!in) {
    throw ParseError(path + ": truncated index file");
  }
  return value;
}

std::string get_string(std::istream& in, const std::string& path) {
  const auto size = get<std::uint32_t>(in, path);
  std::string s(size, '\0');
  in.read(s.data(), size);
  if (!in) {
    throw ParseError(path + ": truncated index file");
  }
  return s;
}

}  // namespace

void save_index(const InvertedIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write \"" + path + "\"");
  }
  out.write(kMagic, sizeof(kMagic));
  put(out, kVersion);
  put(out, index.params().k1);
  put(out, index.params().b);
  put(out, index.avg_doc_len());
  put<std::uint64_t>(out, index.doc_count());
  for (std::size_t i = 0; i < index.doc_count(); ++i) {
    put_string(out, index.docids()[i]);
    put(out, index.doc_lengths()[i]);
  }
  put<std::uint64_t>(out, index.postings().size());
  for (const auto& [term, postings] : index.postings()) {
    put_string(out, term);
    put<std::uint64_t>(out, postings.size());
    for (const Posting& posting : postings) {
      put(out, posting.doc);
      put(out, posting.tf);
    }
  }
  if (!out.flush()) {
    throw IoError("write failed for \"" + path + "\"");
  }
}

InvertedIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open \"" + path + "\"");
  }
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError(path + ": not an index file");
  }
  const auto version = get<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw ParseError(path + ": unsupported index version " +
                     std::to_string(version));
  }

  InvertedIndex index;
  index.params_.k1 = get<double>(in, path);
  index.params_.b = get<double>(in, path);
  index.avg_doc_len_ = get<double>(in, path);
  const auto doc_count = get<std::uint64_t>(in, path);
  index.docids_.reserve(doc_count);
  index.doc_lengths_.reserve(doc_count);
  for (std::uint64_t i = 0; i < doc_count; ++i) {
    index.docids_.push_back(get_string(in, path));
    index.doc_lengths_.push_back(get<std::uint32_t>(in, path));
  }
  const auto term_count = get<std::uint64_t>(in, path);
  for (std::uint64_t t = 0; t < term_count; ++t) {
    std::string term = get_string(in, path);
    const auto posting_count = get<std::uint64_t>(in, path);
    std::vector<Posting> postings;
    postings.reserve(posting_count);
    for (std::uint64_t p = 0; p < posting_count; ++p) {
      Posting posting;
      posting.doc = get<std::uint32_t>(in, path);
      posting.tf = get<std::uint32_t>(in, path);
      if (posting.doc >= doc_count) {
        throw ParseError(path + ": posting ordinal out of range");
      }
      postings.push_back(posting);
    }
    index.postings_.emplace(std::move(term), std::move(postings));
  }
  return index;
}

}  // namespace convsearch
