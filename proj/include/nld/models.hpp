#pragma once

#include "nld/behavior.hpp"
#include "nld/inequality.hpp"
#include "nld/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nld {

/// Disjoint nonempty party sets covering {0, ..., n-1}.
struct Partition {
    std::vector<std::vector<int>> cells;
    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Nonincreasing cell sizes summing to n, e.g. {2, 2, 1}.
using CardinalityTuple = std::vector<int>;

/// Accepts "2,2,1", "(2,2,1)" or "2 2 1"; the result is sorted nonincreasing.
CardinalityTuple parse_cardinality_tuple(std::string_view text);
std::string to_string(const CardinalityTuple& h);
/// Throws InvalidArgument unless h is a nonincreasing tuple of positive integers summing to n.
void validate_cardinality_tuple(int n, const CardinalityTuple& h);
/// All cardinality tuples of n in reverse lexicographic order, (n) first.
std::vector<CardinalityTuple> cardinality_tuples(int n);

/// All set partitions of {0..n-1} whose sorted cell sizes equal h. Cells are listed in
/// the order of h; equal-size cells are ordered by their smallest party.
std::vector<Partition> partitions_of_type(int n, const CardinalityTuple& h);

struct ModelOptions {
    /// Largest number of strategy products enumerated for one partition.
    std::uint64_t cap = std::uint64_t{1} << 26;
    /// How marginals of signaling cells are defined (only used for WithMarginals).
    MarginalConvention convention = MarginalConvention::TrivialSetting;
    int jobs = 1;
};

/// Extremal behaviors of a hybrid model. Correlator-space vertices whose entries are all
/// +-1 and fit in 64 entries are stored as packed sign words (bit t set means entry t is
/// -1); everything else is stored densely as integers over a common denominator.
class HybridModel {
public:
    HybridModel(Scenario s, CardinalityTuple h, Space space, MarginalConvention convention,
                std::vector<std::uint64_t> packed);
    HybridModel(Scenario s, CardinalityTuple h, Space space, MarginalConvention convention,
                std::vector<std::int32_t> dense, std::int64_t denominator);

    const Scenario& scenario() const noexcept { return scenario_; }
    const CardinalityTuple& h() const noexcept { return h_; }
    Space space() const noexcept { return space_; }
    MarginalConvention convention() const noexcept { return convention_; }
    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept;

    bool is_packed() const noexcept { return packed_storage_; }
    std::span<const std::uint64_t> packed() const noexcept { return packed_; }
    /// Integer numerators of vertex i (length dimension()).
    std::vector<std::int32_t> row(std::size_t i) const;
    std::int64_t denominator() const noexcept { return denominator_; }
    Behavior behavior(std::size_t i) const;

private:
    Scenario scenario_;
    CardinalityTuple h_;
    Space space_;
    MarginalConvention convention_;
    std::size_t dim_;
    bool packed_storage_;
    std::vector<std::uint64_t> packed_;
    std::vector<std::int32_t> dense_;
    std::int64_t denominator_ = 1;
};

/// Vertices of M_h: per partition of type h, products of deterministic cell strategies
/// (each cell may signal internally), deduplicated across partitions.
HybridModel extremal_behaviors(const Scenario& s, const CardinalityTuple& h, Space space,
                               const ModelOptions& options = {});

/// Number of strategy products that extremal_behaviors would visit for one partition.
std::uint64_t strategies_per_partition(const Scenario& s, const CardinalityTuple& h, Space space,
                                       MarginalConvention convention);

/// Class sums s_mu = sum over tuples in class mu of the correlator, for every vertex,
/// row-major (size() x index.size()), scaled by the model denominator.
std::vector<std::int64_t> symmetric_projection(const HybridModel& model, const MultisetIndex& index);

/// max over the model's vertices of the Bell expression -sum c (mu): the constant that
/// makes the inequality valid and tight on the model.
Rational classical_bound(const SymmetricInequality& ineq, const HybridModel& model);

/// Values c0 + sum c (mu) of the inequality on every vertex, scaled by the model denominator
/// and by `scale` (the lcm of the inequality's denominators, returned).
std::vector<Integer> vertex_values(const SymmetricInequality& ineq, const HybridModel& model,
                                   Integer* scale = nullptr);

/// Same bound computed without listing vertices: every cell except the largest is
/// enumerated and the largest cell's table is chosen optimally for each of its inputs.
/// Valid for +-1 cell tables (FullCorrelation, or WithMarginals with TrivialSetting).
Rational classical_bound_direct(const SymmetricInequality& ineq, const CardinalityTuple& h,
                                std::uint64_t cap = std::uint64_t{1} << 30);

/// Binary export, little endian: magic "NLDV", u32 version (1), i32 n, i32 m, u8 space,
/// u8 convention, u8 packed flag, u8 reserved, u32 cell count, i32 cell sizes, u64 rows,
/// u64 dim, i64 denominator, then the rows (u64 words when packed, i32 entries otherwise).
void write_binary(std::ostream& os, const HybridModel& model);
HybridModel read_binary(std::istream& is);

/// {"n", "m", "space", "h", "denominator", "vertices": [[...], ...]} for small models.
nlohmann::json to_json(const HybridModel& model);

}  // namespace nld
