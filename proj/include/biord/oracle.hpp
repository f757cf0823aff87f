#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "biord/aut.hpp"
#include "biord/magnus.hpp"
#include "biord/realization.hpp"
#include "biord/sign.hpp"
#include "biord/word.hpp"

namespace biord {

enum class Provenance { magnus, realized, type_alpha, reversed, pulled_back, custom };

constexpr std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::magnus: return "magnus";
    case Provenance::realized: return "realized";
    case Provenance::type_alpha: return "type-alpha";
    case Provenance::reversed: return "reversed";
    case Provenance::pulled_back: return "pulled-back";
    case Provenance::custom: return "custom";
  }
  return "?";
}

/// A bi-order given by its sign function, i.e. positive cone membership.
/// Signs are memoized; copies share the memo. Calls are serialized, so an
/// oracle may be shared between threads.
class OrderOracle {
 public:
  using SignFn = std::function<Sign(const Word&)>;

  OrderOracle(std::string name, Provenance provenance, std::vector<Word> generators, SignFn fn)
      : state_(std::make_shared<State>()) {
    state_->name = std::move(name);
    state_->provenance = provenance;
    state_->generators = std::move(generators);
    state_->fn = std::move(fn);
  }

  const std::string& name() const { return state_->name; }
  Provenance provenance() const { return state_->provenance; }
  /// Generators spanning the words this oracle is audited on.
  const std::vector<Word>& generators() const { return state_->generators; }

  Sign sign(const Word& w) const {
    std::lock_guard lock(state_->mu);
    auto it = state_->memo.find(w);
    if (it != state_->memo.end()) return it->second;
    Sign s = state_->fn(w);
    state_->memo.emplace(w, s);
    return s;
  }

 private:
  struct State {
    std::string name;
    Provenance provenance = Provenance::custom;
    std::vector<Word> generators;
    SignFn fn;
    std::mutex mu;
    std::unordered_map<Word, Sign, WordHash> memo;
  };
  std::shared_ptr<State> state_;
};

inline OrderOracle magnus_oracle() {
  return OrderOracle("magnus", Provenance::magnus, generators_of("ab"), [](const Word& w) { return magnus_sign(w); });
}

/// Germ order of a realization: sign of the left germ at the critical point.
inline OrderOracle realized_oracle(const Realization& r, std::string name = "realized") {
  auto rz = std::make_shared<std::pair<Realization, std::unique_ptr<Realizer>>>(r, nullptr);
  rz->second = std::make_unique<Realizer>(rz->first);
  return OrderOracle(std::move(name), Provenance::realized, r.generator_words(), [rz](const Word& w) { return rz->second->sign(w); });
}

/// less when u < v, i.e. when u^-1 v is positive.
inline Comparison compare(const OrderOracle& o, const Word& u, const Word& v) {
  switch (o.sign(invert(u) * v)) {
    case Sign::positive: return Comparison::less;
    case Sign::negative: return Comparison::greater;
    case Sign::zero: break;
  }
  return Comparison::equal;
}

inline std::vector<Word> positive_cone_ball(const OrderOracle& o, int radius) {
  std::vector<Word> out;
  for (const Word& w : ball(std::span<const Word>(o.generators()), radius)) {
    if (o.sign(w) == Sign::positive) out.push_back(w);
  }
  return out;
}

/// f positive iff (f > 1 and f outside gamma) or (f < 1 and f in gamma).
inline OrderOracle reverse_on(const OrderOracle& o, std::function<bool(const Word&)> in_gamma) {
  return OrderOracle("reversed(" + o.name() + ")", Provenance::reversed, o.generators(),
                     [o, in_gamma = std::move(in_gamma)](const Word& w) {
                       Sign s = o.sign(w);
                       return in_gamma(w) ? -s : s;
                     });
}

/// sign'(w) = sign(sigma(w)).
inline OrderOracle pullback(const OrderOracle& o, const AutWord& sigma) {
  return OrderOracle("pullback(" + o.name() + ", " + format_aut(sigma) + ")", Provenance::pulled_back, o.generators(),
                     [o, sigma](const Word& w) { return o.sign(apply_aut(sigma, w)); });
}

// ---------------------------------------------------------------------------
// Bi-invariance audit

enum class ViolationKind { totality, antisymmetry, left_invariance, right_invariance, transitivity };

constexpr std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::totality: return "totality";
    case ViolationKind::antisymmetry: return "antisymmetry";
    case ViolationKind::left_invariance: return "left-invariance";
    case ViolationKind::right_invariance: return "right-invariance";
    case ViolationKind::transitivity: return "transitivity";
  }
  return "?";
}

/// One failed check. For the invariance kinds the comparison of f with g
/// changed after multiplying both by h; for totality and antisymmetry only
/// `f` is meaningful; for transitivity f < g < h but not f < h.
struct BiinvViolation {
  ViolationKind kind;
  Word f;
  Word g;
  Word h;
};

struct BiinvReport {
  std::size_t words = 0;
  std::size_t triples = 0;
  std::vector<BiinvViolation> violations;

  bool ok() const { return violations.empty(); }
};

inline std::string format_violation(const BiinvViolation& v) {
  std::string s(to_string(v.kind));
  s += ": f=" + format_word(v.f);
  if (v.kind != ViolationKind::totality && v.kind != ViolationKind::antisymmetry) {
    s += " g=" + format_word(v.g) + " h=" + format_word(v.h);
  }
  return s;
}

/// Checks totality and antisymmetry on every word and, for all triples
/// (f, g, h) of `words`, that sign(g^-1 f) survives left and right
/// multiplication by h, and that the order is transitive.
inline BiinvReport check_biinvariance(const OrderOracle& o, std::span<const Word> words,
                                      std::size_t max_violations = 1000) {
  BiinvReport rep;
  rep.words = words.size();
  auto add = [&](BiinvViolation v) {
    if (rep.violations.size() < max_violations) rep.violations.push_back(std::move(v));
  };
  for (const Word& w : words) {
    const Sign s = o.sign(w);
    if ((s == Sign::zero) != w.empty()) add({ViolationKind::totality, w, {}, {}});
    if (o.sign(invert(w)) != -s) add({ViolationKind::antisymmetry, w, {}, {}});
  }
  const std::size_t n = words.size();
  // cmp[i * n + j] = sign(w_j^-1 w_i): positive when w_j < w_i.
  std::vector<Sign> cmp(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cmp[i * n + j] = o.sign(invert(words[j]) * words[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Word& f = words[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Word& g = words[j];
      const Sign base = cmp[i * n + j];
      for (std::size_t k = 0; k < n; ++k) {
        const Word& h = words[k];
        ++rep.triples;
        if (o.sign(invert(h * g) * (h * f)) != base) add({ViolationKind::left_invariance, f, g, h});
        if (o.sign(invert(g * h) * (f * h)) != base) add({ViolationKind::right_invariance, f, g, h});
        // words[i] < words[j] < words[k] must give words[i] < words[k].
        if (cmp[j * n + i] == Sign::positive && cmp[k * n + j] == Sign::positive &&
            cmp[k * n + i] != Sign::positive) {
          add({ViolationKind::transitivity, f, g, h});
        }
      }
    }
  }
  return rep;
}

inline BiinvReport check_biinvariance(const OrderOracle& o, int radius, std::size_t max_violations = 1000) {
  std::vector<Word> words = ball(std::span<const Word>(o.generators()), radius);
  return check_biinvariance(o, std::span<const Word>(words), max_violations);
}

}  // namespace biord
