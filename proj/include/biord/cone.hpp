#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "biord/errors.hpp"
#include "biord/word.hpp"

namespace biord {

/// One derivation step: `result` = left * right for a product, or
/// conjugate(left, right) = right * left * right^-1 for a conjugation by a
/// generator or its inverse.
struct DerivationStep {
  enum class Kind { product, conjugation };
  Kind kind = Kind::product;
  Word result;
  Word left;
  Word right;
};

inline std::string format_step(const DerivationStep& s) {
  if (s.kind == DerivationStep::Kind::product) {
    return format_word(s.result) + " = (" + format_word(s.left) + ") * (" + format_word(s.right) + ")";
  }
  return format_word(s.result) + " = conj(" + format_word(s.left) + ", " + format_word(s.right) + ")";
}

struct ConeCertificate {
  enum class Status { consistent, contradiction };
  Status status = Status::consistent;
  /// Some w with both w and w^-1 derived positive.
  std::optional<Word> witness;
  /// Non-seed steps needed for the witness and its inverse, in replay order.
  std::vector<DerivationStep> derivation;
  int rounds = 0;
  std::size_t derived = 0;
  /// True when the closure reached a fixed point under the length bound, so
  /// a consistent verdict is final at that bound.
  bool complete = false;
};

struct SaturateLimits {
  int max_rounds = 16;
  std::size_t max_words = 200000;
};

namespace detail {

inline void collect_steps(const Word& w, const std::unordered_map<Word, DerivationStep, WordHash>& parent,
                          std::unordered_set<Word, WordHash>& done, std::vector<DerivationStep>& out) {
  if (done.count(w)) return;
  done.insert(w);
  auto it = parent.find(w);
  if (it == parent.end()) return;  // a seed
  collect_steps(it->second.left, parent, done, out);
  if (it->second.kind == DerivationStep::Kind::product) collect_steps(it->second.right, parent, done, out);
  out.push_back(it->second);
}

}  // namespace detail

/// Closes `seeds` under pairwise products and conjugation by the generators
/// of `factors` and their inverses, dropping words longer than `length_bound`,
/// until some word and its inverse are both derived or nothing new appears.
/// Each round combines the words found in the previous round with everything
/// known so far.
inline ConeCertificate cone_saturate(std::span<const Word> seeds, std::int64_t length_bound,
                                     SaturateLimits limits = {}, std::string_view factors = "ab") {
  for (const Word& s : seeds) {
    if (s.empty()) throw PreconditionError("cone seeds must not be the identity");
    if (s.length() > length_bound) throw PreconditionError("length bound below a seed length");
  }
  ConeCertificate cert;
  std::vector<Word> conjugators;
  for (const Word& g : generators_of(factors)) {
    conjugators.push_back(g);
    conjugators.push_back(invert(g));
  }
  std::unordered_set<Word, WordHash> known;
  std::vector<Word> all;
  std::unordered_map<Word, DerivationStep, WordHash> parent;

  auto finish = [&](const Word& w) {
    cert.status = ConeCertificate::Status::contradiction;
    cert.witness = w;
    std::unordered_set<Word, WordHash> done;
    detail::collect_steps(w, parent, done, cert.derivation);
    detail::collect_steps(invert(w), parent, done, cert.derivation);
    cert.derived = known.size();
  };
  // Inserts w; true when w closes a contradiction.
  auto add = [&](const Word& w, const DerivationStep* how) {
    if (w.length() > length_bound || known.count(w)) return false;
    known.insert(w);
    all.push_back(w);
    if (how) parent.emplace(w, *how);
    return w.empty() || known.count(invert(w)) > 0;
  };

  for (const Word& s : seeds) {
    if (add(s, nullptr)) {
      finish(s);
      return cert;
    }
  }
  std::vector<Word> fresh = all;
  while (!fresh.empty()) {
    if (cert.rounds >= limits.max_rounds || known.size() >= limits.max_words) {
      cert.derived = known.size();
      return cert;
    }
    ++cert.rounds;
    const std::size_t before = all.size();
    const std::unordered_set<Word, WordHash> fresh_set(fresh.begin(), fresh.end());
    auto try_add = [&](DerivationStep step) {
      if (add(step.result, &step)) {
        finish(step.result);
        return true;
      }
      return false;
    };
    const std::vector<Word> snapshot = all;
    for (const Word& u : snapshot) {
      const bool u_fresh = fresh_set.count(u) > 0;
      for (const Word& v : snapshot) {
        if (!u_fresh && !fresh_set.count(v)) continue;
        if (try_add({DerivationStep::Kind::product, u * v, u, v})) return cert;
        if (known.size() >= limits.max_words) break;
      }
    }
    for (const Word& u : fresh) {
      for (const Word& c : conjugators) {
        if (try_add({DerivationStep::Kind::conjugation, conjugate(u, c), u, c})) return cert;
      }
    }
    fresh.assign(all.begin() + static_cast<std::ptrdiff_t>(before), all.end());
  }
  cert.complete = true;
  cert.derived = known.size();
  return cert;
}

/// Re-derives every step from the seeds; true when each step only uses seeds
/// or earlier results, respects the bound, and the witness and its inverse
/// are both reached.
inline bool replay(std::span<const Word> seeds, std::int64_t length_bound, const ConeCertificate& cert,
                   std::string_view factors = "ab") {
  if (cert.status != ConeCertificate::Status::contradiction || !cert.witness) return false;
  std::unordered_set<Word, WordHash> have(seeds.begin(), seeds.end());
  std::vector<Word> conjugators;
  for (const Word& g : generators_of(factors)) {
    conjugators.push_back(g);
    conjugators.push_back(invert(g));
  }
  for (const DerivationStep& s : cert.derivation) {
    if (!have.count(s.left)) return false;
    Word r;
    if (s.kind == DerivationStep::Kind::product) {
      if (!have.count(s.right)) return false;
      r = s.left * s.right;
    } else {
      if (std::find(conjugators.begin(), conjugators.end(), s.right) == conjugators.end()) return false;
      r = conjugate(s.left, s.right);
    }
    if (r != s.result || r.length() > length_bound) return false;
    have.insert(r);
  }
  return have.count(*cert.witness) && have.count(invert(*cert.witness));
}

}  // namespace biord
