#include "scmdebias/debias.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "scmdebias/errors.hpp"

namespace scmdebias {

namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kDegenerate = 1e-12;

void check_dim(const EmbeddingMatrix& emb, const BiasDirection& dir, const char* op) {
    if (static_cast<std::size_t>(dir.direction.size()) != emb.dim()) {
        throw UsageError(std::string(op) + ": direction has dimension " +
                         std::to_string(dir.direction.size()) + ", embedding has " +
                         std::to_string(emb.dim()));
    }
}

void check_unit(const BiasDirection& dir, const char* op) {
    const double n = dir.direction.norm();
    if (std::abs(n - 1.0) > kUnitTolerance) {
        throw NumericError(std::string(op) + ": bias direction is not unit length (norm " +
                           std::to_string(n) + ")");
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Union-find over token rows, used to merge overlapping equality pairs.
class DisjointSets {
public:
    std::size_t find(std::size_t x) {
        auto it = parent_.try_emplace(x, x).first;
        if (it->second == x) return x;
        const std::size_t root = find(it->second);
        parent_[x] = root;
        return root;
    }
    void unite(std::size_t a, std::size_t b) {
        const std::size_t ra = find(a);
        const std::size_t rb = find(b);
        if (ra != rb) parent_[rb] = ra;
    }

private:
    std::unordered_map<std::size_t, std::size_t> parent_;
};

}  // namespace

std::string_view method_name(Method method) {
    switch (method) {
        case Method::Sub: return "Sub";
        case Method::LP: return "LP";
        case Method::PP: return "PP";
        case Method::HD: return "HD";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    const std::string lower = to_lower(std::string(name));
    if (lower == "sub") return Method::Sub;
    if (lower == "lp") return Method::LP;
    if (lower == "pp") return Method::PP;
    if (lower == "hd") return Method::HD;
    throw UsageError("unknown debiasing method '" + std::string(name) + "' (expected sub, lp, pp, hd)");
}

void DebiasSpec::validate() const {
    if (dimensions.empty()) throw UsageError("debias spec needs at least one bias dimension");
    if (method == Method::PP) {
        if (!std::isfinite(pp_sigma) || pp_sigma < 0.0) throw UsageError("PP sigma must be non-negative");
        if (pp_sigma == 0.0 && !allow_zero_sigma) throw UsageError("PP sigma must be positive");
    }
}

EmbeddingMatrix subtract(const EmbeddingMatrix& emb, const BiasDirection& dir) {
    check_dim(emb, dir, "subtract");
    Matrix out = emb.vectors();
    out.rowwise() -= dir.direction.transpose();
    return emb.with_vectors(std::move(out));
}

EmbeddingMatrix linear_project(const EmbeddingMatrix& emb, const BiasDirection& dir) {
    check_dim(emb, dir, "linear_project");
    check_unit(dir, "linear_project");
    const Vector& v = dir.direction;
    const Vector along = emb.vectors() * v;
    Matrix out = emb.vectors() - along * v.transpose();
    return emb.with_vectors(std::move(out));
}

EmbeddingMatrix partial_project(const EmbeddingMatrix& emb, const BiasDirection& dir,
                                double sigma) {
    check_dim(emb, dir, "partial_project");
    check_unit(dir, "partial_project");
    if (static_cast<std::size_t>(dir.anchor_mean.size()) != emb.dim()) {
        throw UsageError("partial_project: anchor mean dimension mismatch");
    }
    if (!std::isfinite(sigma) || sigma < 0.0) throw UsageError("partial_project: sigma must be >= 0");

    const Vector& v = dir.direction;
    const Vector& mu = dir.anchor_mean;
    const double mu_along = mu.dot(v);
    const double sigma2 = sigma * sigma;

    const Vector along = emb.vectors() * v;
    Matrix out = emb.vectors() - along * v.transpose();  // r(w)
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double eta = out.row(i).norm();
        const double f = sigma2 / ((eta + 1.0) * (eta + 1.0));
        const double beta = along(i) - mu_along;
        out.row(i) += mu.transpose() + (beta * f) * v.transpose();
    }
    return emb.with_vectors(std::move(out));
}

std::unordered_set<std::string> complement_of_pairs(const EmbeddingMatrix& emb,
                                                    const WordPairSet& pairs) {
    const auto definitional = pairs.tokens();
    const std::unordered_set<std::string> skip(definitional.begin(), definitional.end());
    std::unordered_set<std::string> out;
    out.reserve(emb.size());
    for (const auto& t : emb.tokens()) {
        if (!skip.contains(t)) out.insert(t);
    }
    return out;
}

EmbeddingMatrix hard_debias(const EmbeddingMatrix& emb, const BiasDirection& dir,
                            const std::unordered_set<std::string>& neutral,
                            const WordPairSet& equality_pairs) {
    check_dim(emb, dir, "hard_debias");
    check_unit(dir, "hard_debias");
    const Vector& v = dir.direction;
    Matrix out = unit_normalized(emb).vectors();

    // Group equality pairs into sets; a token shared by two pairs joins them.
    DisjointSets sets;
    std::vector<std::size_t> members;
    std::unordered_set<std::size_t> equalized;
    for (const auto& p : equality_pairs.pairs) {
        const std::size_t a = emb.index_of(p.plus);
        const std::size_t b = emb.index_of(p.minus);
        sets.unite(a, b);
        for (std::size_t row : {a, b}) {
            if (equalized.insert(row).second) members.push_back(row);
        }
    }

    for (const auto& token : neutral) {
        const auto row = emb.find(token);
        if (!row || equalized.contains(*row)) continue;
        const auto i = static_cast<Eigen::Index>(*row);
        const double along = out.row(i).dot(v);
        out.row(i) -= along * v.transpose();
        const double n = out.row(i).norm();
        if (n <= kDegenerate) {
            throw NumericError("hard_debias: '" + token + "' lies on the bias direction");
        }
        out.row(i) /= n;
    }

    std::unordered_map<std::size_t, std::vector<std::size_t>> groups;
    std::vector<std::size_t> roots;
    for (std::size_t row : members) {
        const std::size_t root = sets.find(row);
        auto [it, inserted] = groups.try_emplace(root);
        if (inserted) roots.push_back(root);
        it->second.push_back(row);
    }

    for (std::size_t root : roots) {
        const auto& group = groups[root];
        Vector mean = Vector::Zero(out.cols());
        for (std::size_t row : group) mean += out.row(static_cast<Eigen::Index>(row)).transpose();
        mean /= static_cast<double>(group.size());
        const Vector nu = mean - mean.dot(v) * v;
        const double z = std::sqrt(std::max(0.0, 1.0 - nu.squaredNorm()));
        std::vector<double> sides;
        sides.reserve(group.size());
        for (std::size_t row : group) {
            const double side = (out.row(static_cast<Eigen::Index>(row)).transpose() - mean).dot(v);
            if (std::abs(side) <= kDegenerate) {
                throw NumericError("hard_debias: equality set containing '" + emb.token(row) +
                                   "' collapses onto the bias hyperplane");
            }
            sides.push_back(side);
        }
        for (std::size_t k = 0; k < group.size(); ++k) {
            const double sign = sides[k] > 0.0 ? 1.0 : -1.0;
            out.row(static_cast<Eigen::Index>(group[k])) = (nu + (z * sign) * v).transpose();
        }
    }
    return emb.with_vectors(std::move(out));
}

std::uint64_t dimension_seed(std::uint64_t trial_seed, std::size_t index) {
    return splitmix64(trial_seed + (static_cast<std::uint64_t>(index) + 1) * 0x9E3779B97F4A7C15ULL);
}

EmbeddingMatrix run_pipeline(const EmbeddingMatrix& emb, const DebiasSpec& spec,
                             std::uint64_t seed, std::size_t sample_size,
                             std::vector<BiasDirection>* directions) {
    spec.validate();
    EmbeddingMatrix current = emb;
    for (std::size_t idx = 0; idx < spec.dimensions.size(); ++idx) {
        const WordPairSet& dimension = spec.dimensions[idx];
        const std::uint64_t sub_seed = dimension_seed(seed, idx);
        const WordPairSet sample = sample_pairs(dimension, sample_size, sub_seed);
        if (spec.method == Method::HD) current = unit_normalized(current);
        BiasDirection dir = compute_bias_direction(current, sample);
        dir.seed = sub_seed;
        switch (spec.method) {
            case Method::Sub: current = subtract(current, dir); break;
            case Method::LP: current = linear_project(current, dir); break;
            case Method::PP: current = partial_project(current, dir, spec.pp_sigma); break;
            case Method::HD: {
                const auto neutral = spec.hd_neutral ? *spec.hd_neutral
                                                     : complement_of_pairs(current, dimension);
                current = hard_debias(current, dir, neutral, dimension);
                break;
            }
        }
        if (directions) directions->push_back(std::move(dir));
    }
    return current;
}

}  // namespace scmdebias
