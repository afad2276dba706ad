#include "uiobank/multi_observer.hpp"

#include <algorithm>

namespace uiobank {

std::string ObserverKey::to_string() const {
    if (actuators.universe() == 0 && actuators.empty()) return sensors.to_string();
    return actuators.to_string() + "|" + sensors.to_string();
}

namespace {

ObserverKey complete_key(const IndexSet& sensors) {
    return ObserverKey{IndexSet::empty_set(0), sensors};
}

} // namespace

UioRunner::UioRunner(const CompleteUioDesign& design, const Vec& xhat0, const Vec& y0)
    : key_(complete_key(design.sensors)), n_(design.N), l_(design.L), e_(design.E),
      rows_(design.sensors.indices().begin(), design.sensors.indices().end()),
      radius_(spectral_radius(design.N)), uses_input_(false) {
    output_count_ = design.sensors.universe();
    if (xhat0.size() != n_.rows() || y0.size() != output_count_) {
        fail(ErrorCode::invalid_input, "observer initialization has wrong dimensions");
    }
    y_prev_sel_ = select(y0);
    z_ = xhat0 - e_ * y_prev_sel_;
}

UioRunner::UioRunner(const PartialUioDesign& design, const Mat& input_matrix, const Vec& xhat0,
                     const Vec& y0)
    : key_{design.actuators, design.sensors}, n_(design.N), l_(design.L), e_(design.E),
      tb_(design.T * input_matrix),
      rows_(design.sensors.indices().begin(), design.sensors.indices().end()),
      radius_(spectral_radius(design.N)), uses_input_(true) {
    input_count_ = static_cast<int>(input_matrix.cols());
    output_count_ = design.sensors.universe();
    if (xhat0.size() != n_.rows() || y0.size() != output_count_) {
        fail(ErrorCode::invalid_input, "observer initialization has wrong dimensions");
    }
    y_prev_sel_ = select(y0);
    z_ = xhat0 - e_ * y_prev_sel_;
}

Vec UioRunner::select(const Vec& y) const {
    Vec out(static_cast<Eigen::Index>(rows_.size()));
    Eigen::Index r = 0;
    for (int i : rows_) out(r++) = y(i - 1);
    return out;
}

Vec UioRunner::step(const Vec& u_prev, const Vec& y_now) {
    if (y_now.size() != output_count_) {
        fail(ErrorCode::invalid_input, "output sample has wrong length");
    }
    if (uses_input_ && u_prev.size() != input_count_) {
        fail(ErrorCode::invalid_input, "input sample has wrong length");
    }
    Vec z_next = n_ * z_ + l_ * y_prev_sel_;
    if (uses_input_) z_next += tb_ * u_prev;
    z_ = std::move(z_next);
    y_prev_sel_ = select(y_now);
    return z_ + e_ * y_prev_sel_;
}

Vec UioRunner::estimate(const Vec& y_now) const { return z_ + e_ * select(y_now); }

double max_deviation(const Vec& candidate, std::span<const Vec> references) {
    if (references.empty()) {
        fail(ErrorCode::internal_inconsistency, "deviation score needs at least one reference");
    }
    double worst = 0.0;
    for (const Vec& ref : references) worst = std::max(worst, (candidate - ref).norm());
    return worst;
}

std::size_t select_min(std::span<const std::pair<ObserverKey, double>> scores) {
    if (scores.empty()) fail(ErrorCode::internal_inconsistency, "selection over an empty bank");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i].second < scores[best].second ||
            (scores[i].second == scores[best].second && scores[i].first < scores[best].first)) {
            best = i;
        }
    }
    return best;
}

ObserverBank::ObserverBank(const CompleteBank& bank, const Vec& xhat0, const Vec& y0) {
    for (const CompleteUioDesign& d : bank.candidates) candidates_.emplace_back(d, xhat0, y0);
    for (const CompleteUioDesign& d : bank.references) references_.emplace_back(d, xhat0, y0);
    families_.resize(candidates_.size());
    for (std::size_t ci = 0; ci < bank.candidates.size(); ++ci) {
        for (std::size_t ri = 0; ri < bank.references.size(); ++ri) {
            if (bank.references[ri].sensors.subset_of(bank.candidates[ci].sensors)) {
                families_[ci].push_back(ri);
            }
        }
        if (families_[ci].empty()) {
            fail(ErrorCode::internal_inconsistency, "candidate without reference family");
        }
    }
}

ObserverBank::ObserverBank(const PartialBank& bank, const Mat& input_matrix, const Vec& xhat0,
                           const Vec& y0) {
    for (const PartialUioDesign& d : bank.candidates)
        candidates_.emplace_back(d, input_matrix, xhat0, y0);
    for (const PartialUioDesign& d : bank.references)
        references_.emplace_back(d, input_matrix, xhat0, y0);
    families_.resize(candidates_.size());
    for (std::size_t ci = 0; ci < bank.candidates.size(); ++ci) {
        const PartialUioDesign& cand = bank.candidates[ci];
        for (std::size_t ri = 0; ri < bank.references.size(); ++ri) {
            const PartialUioDesign& ref = bank.references[ri];
            if (cand.actuators.subset_of(ref.actuators) && ref.sensors.subset_of(cand.sensors)) {
                families_[ci].push_back(ri);
            }
        }
        if (families_[ci].empty()) {
            fail(ErrorCode::internal_inconsistency, "candidate without reference family");
        }
    }
}

const std::vector<std::size_t>& ObserverBank::family(std::size_t candidate_index) const {
    return families_.at(candidate_index);
}

double ObserverBank::max_dynamics_radius() const {
    double worst = 0.0;
    for (const UioRunner& r : candidates_) worst = std::max(worst, r.dynamics_radius());
    for (const UioRunner& r : references_) worst = std::max(worst, r.dynamics_radius());
    return worst;
}

SelectionRecord ObserverBank::make_record(int k, const std::vector<Vec>& cand_est,
                                          const std::vector<Vec>& ref_est) const {
    SelectionRecord rec;
    rec.k = k;
    rec.scores.reserve(candidates_.size());
    for (std::size_t ci = 0; ci < candidates_.size(); ++ci) {
        std::vector<Vec> fam;
        fam.reserve(families_[ci].size());
        for (std::size_t ri : families_[ci]) fam.push_back(ref_est[ri]);
        rec.scores.emplace_back(candidates_[ci].key(), max_deviation(cand_est[ci], fam));
    }
    const std::size_t best = select_min(rec.scores);
    rec.selected = rec.scores[best].first;
    rec.estimate = cand_est[best];
    rec.min_score = rec.scores[best].second;
    return rec;
}

SelectionRecord ObserverBank::initial(const Vec& y0) const {
    std::vector<Vec> cand_est, ref_est;
    cand_est.reserve(candidates_.size());
    ref_est.reserve(references_.size());
    for (const UioRunner& r : candidates_) cand_est.push_back(r.estimate(y0));
    for (const UioRunner& r : references_) ref_est.push_back(r.estimate(y0));
    return make_record(0, cand_est, ref_est);
}

SelectionRecord ObserverBank::step(const Vec& u_prev, const Vec& y_now) {
    ++k_;
    std::vector<Vec> cand_est, ref_est;
    cand_est.reserve(candidates_.size());
    ref_est.reserve(references_.size());
    for (UioRunner& r : candidates_) cand_est.push_back(r.step(u_prev, y_now));
    for (UioRunner& r : references_) ref_est.push_back(r.step(u_prev, y_now));
    return make_record(k_, cand_est, ref_est);
}

} // namespace uiobank
