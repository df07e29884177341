#include "hetnet/association.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <span>
#include <string>

#include "hetnet/errors.hpp"

namespace hetnet {

Scheme Scheme::k_plus_one(int k) {
  if (k < 0) throw ParameterError("k_plus_one: k must be non-negative");
  return Scheme(Kind::kKPlusOne, k);
}

Scheme Scheme::parse(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "SA") return single();
  if (upper == "DA") return dual();
  constexpr std::string_view prefix = "KPLUS1_";
  if (upper.starts_with(prefix)) {
    const char* first = upper.data() + prefix.size();
    const char* last = upper.data() + upper.size();
    int k = -1;
    auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec == std::errc() && ptr == last && first != last && k >= 0) {
      return k_plus_one(k);
    }
  }
  throw ParameterError("unknown scheme '" + std::string(name) +
                       "' (expected SA, DA or KPLUS1_<k>)");
}

std::string Scheme::name() const {
  switch (kind_) {
    case Kind::kSingle:
      return "SA";
    case Kind::kDouble:
      return "DA";
    case Kind::kKPlusOne:
      return "KPLUS1_" + std::to_string(k_);
  }
  return {};
}

Index AssociationOutcome::success_count() const {
  return std::count(success.begin(), success.end(), true);
}

std::vector<bool> success_indicators(const AssociationOutcome& outcome,
                                     double beta_linear) {
  std::vector<bool> out(outcome.link_sirs.size(), false);
  for (std::size_t i = 0; i < outcome.link_sirs.size(); ++i) {
    for (double sir : outcome.link_sirs[i]) {
      if (sir >= beta_linear) {
        out[i] = true;
        break;
      }
    }
  }
  return out;
}

LinkEvaluator::LinkEvaluator(const NetworkRealization& realization,
                             const SystemParams& params, Index max_sbs)
    : realization_(&realization),
      params_(&params),
      own_mbs_powers_(relative_transmit_powers(realization, params)) {
  const Index n = realization.user_count();
  nearest_sbs_.resize(static_cast<std::size_t>(n));
  cache_.resize(static_cast<std::size_t>(n));
  const Index keep = std::min(max_sbs, realization.sbs.size());
  if (keep > 0) {
    const NeighborIndex index(realization.sbs);
    for (Index i = 0; i < n; ++i) {
      nearest_sbs_[i] = index.nearest_k(realization.users.coords.col(i), keep);
    }
  }
}

Receiver LinkEvaluator::single_choice(Index user) const {
  const auto& sbs = nearest_sbs_[user];
  if (!sbs.empty() && sbs.front().distance < realization_->users.dist_to_mbs[user]) {
    return {Tier::kSbs, sbs.front().index};
  }
  return {Tier::kMbs, realization_->users.mbs_index[user]};
}

double LinkEvaluator::single_choice_distance(Index user) const {
  const Receiver rx = single_choice(user);
  return rx.tier == Tier::kSbs ? nearest_sbs_[user].front().distance
                               : realization_->users.dist_to_mbs[user];
}

double LinkEvaluator::link_sir(Index user, Receiver rx) {
  auto& links = cache_[user];
  for (const CachedLink& link : links) {
    if (link.rx == rx) return link.sir;
  }
  const double sir = sir_at(rx, user, *realization_,
                            std::span<const double>(own_mbs_powers_.data(),
                                                    own_mbs_powers_.size()),
                            params_->alpha);
  links.push_back({rx, sir});
  return sir;
}

double LinkEvaluator::serving_anchored_sir(Index user, Receiver rx) {
  if (!serving_powers_) {
    const Index n = realization_->user_count();
    Eigen::VectorXd p(n);
    for (Index i = 0; i < n; ++i) {
      p[i] = relative_transmit_power(single_choice_distance(i), *params_);
    }
    serving_powers_ = std::move(p);
  }
  return sir_at(rx, user, *realization_,
                std::span<const double>(serving_powers_->data(), serving_powers_->size()),
                params_->alpha);
}

AssociationOutcome associate(const Scheme& scheme, LinkEvaluator& links) {
  const NetworkRealization& net = links.realization();
  const SystemParams& params = links.params();
  const Index n = net.user_count();
  if (net.mbs.empty()) throw ParameterError("associate: realization has no MBS");

  const int k = scheme.sbs_count();
  if (scheme.kind() != Scheme::Kind::kSingle) {
    if (net.sbs.size() < k) {
      throw ParameterError("associate: scheme " + scheme.name() + " needs " +
                           std::to_string(k) + " SBSs, realization has " +
                           std::to_string(net.sbs.size()));
    }
    if (n > 0 && static_cast<int>(links.nearest_sbs(0).size()) < k) {
      throw ParameterError("associate: link evaluator keeps too few SBS neighbours for " +
                           scheme.name());
    }
  }

  AssociationOutcome out;
  out.scheme = scheme;
  out.serving_set.resize(static_cast<std::size_t>(n));
  out.link_sirs.resize(static_cast<std::size_t>(n));

  const bool serving_anchor = scheme.kind() == Scheme::Kind::kSingle &&
                              params.fpc_anchor == FpcAnchor::kServingNode;
  for (Index i = 0; i < n; ++i) {
    auto& set = out.serving_set[i];
    auto& sirs = out.link_sirs[i];
    if (scheme.kind() == Scheme::Kind::kSingle) {
      const Receiver rx = links.single_choice(i);
      set.push_back(rx);
      sirs.push_back(serving_anchor ? links.serving_anchored_sir(i, rx)
                                    : links.link_sir(i, rx));
      continue;
    }
    set.push_back({Tier::kMbs, net.users.mbs_index[i]});
    for (int j = 0; j < k; ++j) set.push_back({Tier::kSbs, links.nearest_sbs(i)[j].index});
    for (const Receiver& rx : set) sirs.push_back(links.link_sir(i, rx));
  }
  out.success = success_indicators(out, params.beta_linear());
  return out;
}

AssociationOutcome associate(const Scheme& scheme, const NetworkRealization& realization,
                             const SystemParams& params) {
  const Index keep = scheme.kind() == Scheme::Kind::kSingle ? 1 : scheme.sbs_count();
  LinkEvaluator links(realization, params, keep);
  return associate(scheme, links);
}

}  // namespace hetnet
