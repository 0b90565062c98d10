#include "nld/errors.hpp"
#include "nld/kernels.hpp"
#include "nld/models.hpp"
#include "nld/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace nld {

namespace {

// Strategy tables of one cell. Local inputs are digit strings over the cell's parties,
// base m with digit x-1 (full correlation) or base m+1 with digit x (with marginals; local
// index 0 is the all-trivial input whose value is fixed to +1).
struct CellTables {
    int size = 0;
    std::size_t local_dim = 0;
    bool signs = true;                  // +-1 tables, stored in `packed`
    std::vector<std::uint64_t> packed;  // bit l set: table(l) = -1
    std::vector<std::int32_t> dense;    // count * local_dim numerators over `denominator`
    std::int64_t denominator = 1;

    std::size_t count() const { return signs ? packed.size() : dense.size() / local_dim; }
    std::int32_t value(std::size_t i, std::size_t l) const {
        if (signs) return ((packed[i] >> l) & 1u) ? -1 : 1;
        return dense[i * local_dim + l];
    }
};

std::vector<int> local_digits(std::size_t l, int size, int base) {
    std::vector<int> d(static_cast<std::size_t>(size));
    for (auto& x : d) {
        x = static_cast<int>(l % static_cast<std::size_t>(base));
        l /= static_cast<std::size_t>(base);
    }
    return d;
}

std::uint64_t checked_pow2(std::size_t bits, std::uint64_t cap, const char* what) {
    if (bits >= 63 || (std::uint64_t{1} << bits) > cap)
        throw CapExceeded(std::string(what) + ": 2^" + std::to_string(bits) +
                          " strategies exceed the configured cap of " + std::to_string(cap));
    return std::uint64_t{1} << bits;
}

CellTables cell_tables(int size, int m, Space space, MarginalConvention convention,
                       bool fix_first_sign, std::uint64_t cap) {
    CellTables t;
    t.size = size;
    const bool marginals = space == Space::WithMarginals;
    const int base = marginals ? m + 1 : m;
    t.local_dim = ipow(static_cast<std::size_t>(base), size);
    if (t.local_dim > 64) throw CapExceeded("cell table with more than 64 entries");

    const bool arbitrary = !marginals || convention == MarginalConvention::TrivialSetting || size == 1;
    if (arbitrary) {
        // every +-1 table is realized by some deterministic cell strategy
        std::vector<std::size_t> free;
        for (std::size_t l = 0; l < t.local_dim; ++l) {
            if (marginals && l == 0) continue;
            if (!marginals && fix_first_sign && l == 0) continue;
            free.push_back(l);
        }
        const std::uint64_t count = checked_pow2(free.size(), cap, "cell strategies");
        t.packed.resize(count);
        for (std::uint64_t k = 0; k < count; ++k) {
            std::uint64_t w = 0;
            for (std::size_t b = 0; b < free.size(); ++b)
                if ((k >> b) & 1u) w |= std::uint64_t{1} << free[b];
            t.packed[k] = w;
        }
        return t;
    }

    // marginal convention on a signaling cell: enumerate per-party output functions
    const std::size_t inputs = ipow(static_cast<std::size_t>(m), size);
    const std::size_t bits = static_cast<std::size_t>(size) * inputs;
    const std::uint64_t count = checked_pow2(bits, cap, "cell output functions");
    const bool average = convention == MarginalConvention::UniformAverage;
    t.denominator = average ? static_cast<std::int64_t>(ipow(static_cast<std::size_t>(m), size - 1)) : 1;

    // for every local input: the list of full inputs (completions) it averages over
    std::vector<std::vector<std::size_t>> completions(t.local_dim);
    std::vector<std::uint32_t> active(t.local_dim);
    for (std::size_t l = 1; l < t.local_dim; ++l) {
        const auto d = local_digits(l, size, base);
        std::vector<int> zeros;
        for (int k = 0; k < size; ++k) {
            if (d[k] == 0)
                zeros.push_back(k);
            else
                active[l] |= 1u << k;
        }
        const std::size_t n_comp = average ? ipow(static_cast<std::size_t>(m), static_cast<int>(zeros.size())) : 1;
        for (std::size_t c = 0; c < n_comp; ++c) {
            std::size_t r = c, full = 0, mul = 1;
            auto x = d;
            for (int k : zeros) {
                x[k] = average ? 1 + static_cast<int>(r % static_cast<std::size_t>(m)) : 1;
                if (average) r /= static_cast<std::size_t>(m);
            }
            for (int k = 0; k < size; ++k) {
                full += static_cast<std::size_t>(x[k] - 1) * mul;
                mul *= static_cast<std::size_t>(m);
            }
            completions[l].push_back(full);
        }
    }

    std::set<std::vector<std::int32_t>> seen_dense;
    std::set<std::uint64_t> seen_packed;
    for (std::uint64_t k = 0; k < count; ++k) {
        // bit (party * inputs + input) of k: output of party at that input is -1
        std::vector<std::int32_t> table(t.local_dim);
        table[0] = static_cast<std::int32_t>(t.denominator);
        for (std::size_t l = 1; l < t.local_dim; ++l) {
            std::int64_t sum = 0;
            for (std::size_t full : completions[l]) {
                int parity = 0;
                for (int p = 0; p < size; ++p)
                    if ((active[l] >> p) & 1u) parity ^= static_cast<int>((k >> (p * inputs + full)) & 1u);
                sum += parity ? -1 : 1;
            }
            table[l] = static_cast<std::int32_t>(sum * (t.denominator / static_cast<std::int64_t>(completions[l].size())));
        }
        if (average) {
            seen_dense.insert(std::move(table));
        } else {
            std::uint64_t w = 0;
            for (std::size_t l = 0; l < t.local_dim; ++l)
                if (table[l] < 0) w |= std::uint64_t{1} << l;
            seen_packed.insert(w);
        }
    }
    if (average) {
        t.signs = false;
        for (const auto& row : seen_dense) t.dense.insert(t.dense.end(), row.begin(), row.end());
    } else {
        t.packed.assign(seen_packed.begin(), seen_packed.end());
    }
    return t;
}

// Local input index of `cell` for every global tuple of the space.
std::vector<std::vector<std::size_t>> local_indices(const Scenario& s, Space space,
                                                    const Partition& p) {
    const bool marginals = space == Space::WithMarginals;
    const int base = marginals ? s.settings + 1 : s.settings;
    const std::size_t dim = space_dimension(s, space);
    std::vector<std::vector<std::size_t>> out(p.cells.size(), std::vector<std::size_t>(dim));
    for (std::size_t t = 0; t < dim; ++t) {
        const auto x = tuple_at(s, space, t);
        for (std::size_t c = 0; c < p.cells.size(); ++c) {
            std::size_t l = 0, mul = 1;
            for (int k : p.cells[c]) {
                l += static_cast<std::size_t>(marginals ? x[k] : x[k] - 1) * mul;
                mul *= static_cast<std::size_t>(base);
            }
            out[c][t] = l;
        }
    }
    return out;
}

std::vector<CellTables> tables_for(const Scenario& s, const CardinalityTuple& h, Space space,
                                   MarginalConvention convention, std::uint64_t cap) {
    std::vector<CellTables> cells;
    for (std::size_t c = 0; c < h.size(); ++c)
        cells.push_back(cell_tables(h[c], s.settings, space, convention,
                                    space == Space::FullCorrelation && c + 1 < h.size(), cap));
    return cells;
}

std::uint64_t product_count(const std::vector<CellTables>& cells, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (const auto& c : cells) {
        if (c.count() != 0 && total > cap / c.count())
            throw CapExceeded("strategy products per partition exceed the configured cap of " +
                              std::to_string(cap));
        total *= c.count();
    }
    if (total > cap)
        throw CapExceeded("strategy products per partition exceed the configured cap of " +
                          std::to_string(cap));
    return total;
}

std::vector<std::uint64_t> packed_partition(const Scenario& s, Space space, const Partition& p,
                                            const std::vector<CellTables>& cells) {
    const auto local = local_indices(s, space, p);
    const std::size_t dim = space_dimension(s, space);
    // contribution of each cell table to the global sign word
    std::vector<std::vector<std::uint64_t>> contrib(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        contrib[c].resize(cells[c].count());
        for (std::size_t i = 0; i < cells[c].count(); ++i) {
            std::uint64_t w = 0;
            for (std::size_t t = 0; t < dim; ++t)
                if ((cells[c].packed[i] >> local[c][t]) & 1u) w |= std::uint64_t{1} << t;
            contrib[c][i] = w;
        }
    }
    std::vector<std::uint64_t> out;
    std::uint64_t total = 1;
    for (const auto& c : contrib) total *= c.size();
    out.reserve(total);
    std::vector<std::uint64_t> acc(cells.size() + 1, 0);
    auto rec = [&](auto&& self, std::size_t c) -> void {
        if (c == contrib.size()) {
            out.push_back(acc[c]);
            return;
        }
        for (std::uint64_t w : contrib[c]) {
            acc[c + 1] = acc[c] ^ w;
            self(self, c + 1);
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<std::vector<std::int32_t>> dense_partition(const Scenario& s, Space space,
                                                       const Partition& p,
                                                       const std::vector<CellTables>& cells) {
    const auto local = local_indices(s, space, p);
    const std::size_t dim = space_dimension(s, space);
    std::vector<std::vector<std::int32_t>> out;
    std::vector<std::size_t> choice(cells.size(), 0);
    auto rec = [&](auto&& self, std::size_t c) -> void {
        if (c == cells.size()) {
            std::vector<std::int32_t> row(dim);
            for (std::size_t t = 0; t < dim; ++t) {
                std::int64_t v = 1;
                for (std::size_t k = 0; k < cells.size(); ++k) v *= cells[k].value(choice[k], local[k][t]);
                row[t] = static_cast<std::int32_t>(v);
            }
            out.push_back(std::move(row));
            return;
        }
        for (std::size_t i = 0; i < cells[c].count(); ++i) {
            choice[c] = i;
            self(self, c + 1);
        }
    };
    rec(rec, 0);
    return out;
}

// Deterministic per-party outputs inside each cell; one probability-one entry per input.
std::vector<std::vector<std::int32_t>> probability_partition(const Scenario& s, const Partition& p,
                                                             std::uint64_t cap) {
    const int n = s.parties, m = s.settings;
    const std::size_t outcomes = ipow(2, n);
    const std::size_t inputs = ipow(static_cast<std::size_t>(m), n);
    std::vector<std::size_t> bits(p.cells.size());
    std::size_t total_bits = 0;
    for (std::size_t c = 0; c < p.cells.size(); ++c) {
        bits[c] = p.cells[c].size() * ipow(static_cast<std::size_t>(m), static_cast<int>(p.cells[c].size()));
        total_bits += bits[c];
    }
    const std::uint64_t count = checked_pow2(total_bits, cap, "probability-space strategies");
    std::vector<std::vector<std::int32_t>> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        std::vector<std::int32_t> row(inputs * outcomes, 0);
        for (std::size_t xi = 0; xi < inputs; ++xi) {
            const auto x = tuple_at(s, Space::FullCorrelation, xi);
            std::uint32_t a = 0;
            std::size_t offset = 0;
            for (std::size_t c = 0; c < p.cells.size(); ++c) {
                const auto& cell = p.cells[c];
                const std::size_t local_inputs = ipow(static_cast<std::size_t>(m), static_cast<int>(cell.size()));
                std::size_t l = 0, mul = 1;
                for (int party : cell) {
                    l += static_cast<std::size_t>(x[party] - 1) * mul;
                    mul *= static_cast<std::size_t>(m);
                }
                for (std::size_t j = 0; j < cell.size(); ++j)
                    if ((k >> (offset + j * local_inputs + l)) & 1u) a |= 1u << cell[j];
                offset += bits[c];
            }
            row[xi * outcomes + a] = 1;
        }
        out.push_back(std::move(row));
    }
    return out;
}

bool packable(const Scenario& s, Space space, MarginalConvention convention) {
    if (space == Space::Probability) return false;
    if (space_dimension(s, space) > 64) return false;
    return space == Space::FullCorrelation || convention != MarginalConvention::UniformAverage;
}

}  // namespace

HybridModel::HybridModel(Scenario s, CardinalityTuple h, Space space, MarginalConvention convention,
                         std::vector<std::uint64_t> packed)
    : scenario_(s), h_(std::move(h)), space_(space), convention_(convention),
      dim_(space_dimension(s, space)), packed_storage_(true), packed_(std::move(packed)) {
    if (dim_ > 64) throw InvalidArgument("packed storage needs at most 64 entries");
}

HybridModel::HybridModel(Scenario s, CardinalityTuple h, Space space, MarginalConvention convention,
                         std::vector<std::int32_t> dense, std::int64_t denominator)
    : scenario_(s), h_(std::move(h)), space_(space), convention_(convention),
      dim_(space_dimension(s, space)), packed_storage_(false), dense_(std::move(dense)),
      denominator_(denominator) {
    if (dense_.size() % dim_ != 0) throw DimensionMismatch("dense vertex data is not a whole number of rows");
    if (denominator_ < 1) throw InvalidArgument("denominator must be positive");
}

std::size_t HybridModel::size() const noexcept {
    return packed_storage_ ? packed_.size() : dense_.size() / dim_;
}

std::vector<std::int32_t> HybridModel::row(std::size_t i) const {
    std::vector<std::int32_t> r(dim_);
    if (packed_storage_) {
        for (std::size_t t = 0; t < dim_; ++t) r[t] = ((packed_[i] >> t) & 1u) ? -1 : 1;
    } else {
        std::copy_n(dense_.begin() + static_cast<std::ptrdiff_t>(i * dim_), dim_, r.begin());
    }
    return r;
}

Behavior HybridModel::behavior(std::size_t i) const {
    const auto r = row(i);
    std::vector<Rational> e(dim_);
    for (std::size_t t = 0; t < dim_; ++t) e[t] = Rational(r[t], denominator_);
    return Behavior(scenario_, space_, std::move(e));
}

std::uint64_t strategies_per_partition(const Scenario& s, const CardinalityTuple& h, Space space,
                                       MarginalConvention convention) {
    validate_cardinality_tuple(s.parties, h);
    if (space == Space::Probability) {
        std::size_t bits = 0;
        for (int c : h) bits += static_cast<std::size_t>(c) * ipow(static_cast<std::size_t>(s.settings), c);
        return bits >= 63 ? ~std::uint64_t{0} : std::uint64_t{1} << bits;
    }
    const bool marginals = space == Space::WithMarginals;
    std::size_t bits = 0;
    for (std::size_t c = 0; c < h.size(); ++c) {
        const std::size_t local = ipow(static_cast<std::size_t>(marginals ? s.settings + 1 : s.settings), h[c]);
        if (marginals && convention != MarginalConvention::TrivialSetting && h[c] > 1)
            bits += static_cast<std::size_t>(h[c]) * ipow(static_cast<std::size_t>(s.settings), h[c]);
        else
            bits += local - ((marginals || c + 1 < h.size()) ? 1 : 0);
    }
    return bits >= 63 ? ~std::uint64_t{0} : std::uint64_t{1} << bits;
}

HybridModel extremal_behaviors(const Scenario& s, const CardinalityTuple& h, Space space,
                               const ModelOptions& options) {
    validate_cardinality_tuple(s.parties, h);
    const auto partitions = partitions_of_type(s.parties, h);
    const MarginalConvention convention =
        space == Space::WithMarginals ? options.convention : MarginalConvention::TrivialSetting;

    if (space == Space::Probability) {
        std::vector<std::vector<std::vector<std::int32_t>>> parts(partitions.size());
        parallel_for(partitions.size(), options.jobs,
                     [&](std::size_t i) { parts[i] = probability_partition(s, partitions[i], options.cap); });
        std::set<std::vector<std::int32_t>> all;
        for (auto& part : parts)
            for (auto& r : part) all.insert(std::move(r));
        std::vector<std::int32_t> flat;
        for (const auto& r : all) flat.insert(flat.end(), r.begin(), r.end());
        return HybridModel(s, h, space, convention, std::move(flat), 1);
    }

    const auto cells = tables_for(s, h, space, convention, options.cap);
    product_count(cells, options.cap);

    if (packable(s, space, convention)) {
        std::vector<std::vector<std::uint64_t>> parts(partitions.size());
        parallel_for(partitions.size(), options.jobs,
                     [&](std::size_t i) { parts[i] = packed_partition(s, space, partitions[i], cells); });
        std::vector<std::uint64_t> all;
        for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        return HybridModel(s, h, space, convention, std::move(all));
    }

    std::vector<std::vector<std::vector<std::int32_t>>> parts(partitions.size());
    parallel_for(partitions.size(), options.jobs,
                 [&](std::size_t i) { parts[i] = dense_partition(s, space, partitions[i], cells); });
    std::set<std::vector<std::int32_t>> all;
    for (auto& part : parts)
        for (auto& r : part) all.insert(std::move(r));
    std::int64_t denominator = 1;
    for (const auto& c : cells) denominator *= c.denominator;
    std::vector<std::int32_t> flat;
    for (const auto& r : all) flat.insert(flat.end(), r.begin(), r.end());
    return HybridModel(s, h, space, convention, std::move(flat), denominator);
}

std::vector<std::int64_t> symmetric_projection(const HybridModel& model, const MultisetIndex& index) {
    if (index.scenario() != model.scenario() || index.space() != model.space())
        throw DimensionMismatch("multiset index does not match the model's space");
    const auto& classes = index.tuple_classes();
    const std::size_t k = index.size();
    std::vector<std::int64_t> out(model.size() * k, 0);
    if (model.is_packed()) {
        std::vector<std::uint64_t> masks(k, 0);
        std::vector<std::int64_t> sizes(k, 0);
        for (std::size_t t = 0; t < classes.size(); ++t) {
            masks[classes[t]] |= std::uint64_t{1} << t;
            ++sizes[classes[t]];
        }
        const auto words = model.packed();
        constexpr std::size_t block = 4096;
        std::vector<std::uint32_t> counts(block * k);
        for (std::size_t start = 0; start < words.size(); start += block) {
            const std::size_t len = std::min(block, words.size() - start);
            kernels::class_popcounts(words.subspan(start, len), masks,
                                     std::span<std::uint32_t>(counts.data(), len * k));
            for (std::size_t i = 0; i < len; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    out[(start + i) * k + j] = sizes[j] - 2 * static_cast<std::int64_t>(counts[i * k + j]);
        }
        return out;
    }
    for (std::size_t i = 0; i < model.size(); ++i) {
        const auto r = model.row(i);
        for (std::size_t t = 0; t < r.size(); ++t) out[i * k + classes[t]] += r[t];
    }
    return out;
}

std::vector<Integer> vertex_values(const SymmetricInequality& ineq, const HybridModel& model,
                                   Integer* scale_out) {
    if (ineq.scenario() != model.scenario()) throw DimensionMismatch("scenario mismatch");
    if (model.space() == Space::Probability) throw InvalidArgument("probability-space models have no correlators");
    const auto ineq_in = ineq.in_space(model.space());
    Integer scale = 1;
    scale = lcm(scale, denominator_of(ineq_in.constant()));
    for (const auto& c : ineq_in.coeffs()) scale = lcm(scale, denominator_of(c));
    std::vector<std::int64_t> coeff;
    for (const auto& c : ineq_in.coeffs()) {
        const Integer v = numerator_of(c) * (scale / denominator_of(c));
        if (abs(v) > Integer(1) << 40) throw CapExceeded("inequality coefficients too large for vertex evaluation");
        coeff.push_back(v.convert_to<std::int64_t>());
    }
    const Integer c0 = numerator_of(ineq_in.constant()) * (scale / denominator_of(ineq_in.constant())) * model.denominator();
    const auto proj = symmetric_projection(model, ineq_in.index());
    const std::size_t k = coeff.size();
    std::vector<Integer> out(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        __int128 acc = 0;
        for (std::size_t j = 0; j < k; ++j) acc += static_cast<__int128>(coeff[j]) * proj[i * k + j];
        out[i] = c0 + Integer(static_cast<long long>(acc));
    }
    if (scale_out) *scale_out = scale;
    return out;
}

Rational classical_bound(const SymmetricInequality& ineq, const HybridModel& model) {
    if (model.size() == 0) throw InvalidArgument("model has no extremal behaviors");
    Integer scale;
    const auto values = vertex_values(ineq, model, &scale);
    const Integer lowest = *std::min_element(values.begin(), values.end());
    return ineq.constant() - Rational(lowest, scale * model.denominator());
}

Rational classical_bound_direct(const SymmetricInequality& ineq, const CardinalityTuple& h,
                                std::uint64_t cap) {
    const Scenario& s = ineq.scenario();
    validate_cardinality_tuple(s.parties, h);
    const Space space = ineq.space();
    const auto partition = partitions_of_type(s.parties, h).front();
    const auto local = local_indices(s, space, partition);
    const std::size_t dim = space_dimension(s, space);

    // integer expression coefficients per tuple
    const auto expr = ineq.expression();
    Integer scale = 1;
    for (const auto& c : expr) scale = lcm(scale, denominator_of(c));
    std::vector<std::int64_t> coeff(dim);
    const auto& classes = ineq.index().tuple_classes();
    for (std::size_t t = 0; t < dim; ++t) {
        const auto& c = expr[classes[t]];
        coeff[t] = (numerator_of(c) * (scale / denominator_of(c))).convert_to<std::int64_t>();
    }

    // cell 0 is a largest cell; enumerate the others
    std::vector<CellTables> others;
    for (std::size_t c = 1; c < h.size(); ++c)
        others.push_back(cell_tables(h[c], s.settings, space, MarginalConvention::TrivialSetting, false, cap));
    product_count(others, cap);
    const std::size_t big_dim = ipow(static_cast<std::size_t>(space == Space::WithMarginals ? s.settings + 1 : s.settings), h[0]);
    const bool fixed_zero = space == Space::WithMarginals;

    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::vector<std::size_t> choice(others.size(), 0);
    std::vector<std::int64_t> acc(big_dim);
    auto rec = [&](auto&& self, std::size_t c) -> void {
        if (c == others.size()) {
            std::fill(acc.begin(), acc.end(), 0);
            for (std::size_t t = 0; t < dim; ++t) {
                if (coeff[t] == 0) continue;
                std::int64_t v = coeff[t];
                for (std::size_t k = 0; k < others.size(); ++k)
                    if (others[k].value(choice[k], local[k + 1][t]) < 0) v = -v;
                acc[local[0][t]] += v;
            }
            std::int64_t total = 0;
            for (std::size_t l = 0; l < big_dim; ++l)
                total += (fixed_zero && l == 0) ? acc[l] : std::abs(acc[l]);
            best = std::max(best, total);
            return;
        }
        for (std::size_t i = 0; i < others[c].count(); ++i) {
            choice[c] = i;
            self(self, c + 1);
        }
    };
    rec(rec, 0);
    return Rational(Integer(best), scale);
}

void write_binary(std::ostream& os, const HybridModel& model) {
    auto put = [&](const auto& v) { os.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
    os.write("NLDV", 4);
    put(std::uint32_t{1});
    put(std::int32_t{model.scenario().parties});
    put(std::int32_t{model.scenario().settings});
    put(static_cast<std::uint8_t>(model.space()));
    put(static_cast<std::uint8_t>(model.convention()));
    put(static_cast<std::uint8_t>(model.is_packed() ? 1 : 0));
    put(std::uint8_t{0});
    put(static_cast<std::uint32_t>(model.h().size()));
    for (int c : model.h()) put(std::int32_t{c});
    put(static_cast<std::uint64_t>(model.size()));
    put(static_cast<std::uint64_t>(model.dimension()));
    put(std::int64_t{model.denominator()});
    if (model.is_packed()) {
        const auto w = model.packed();
        os.write(reinterpret_cast<const char*>(w.data()), static_cast<std::streamsize>(w.size_bytes()));
    } else {
        for (std::size_t i = 0; i < model.size(); ++i) {
            const auto r = model.row(i);
            os.write(reinterpret_cast<const char*>(r.data()), static_cast<std::streamsize>(r.size() * sizeof(std::int32_t)));
        }
    }
    if (!os) throw Error("failed to write vertex file");
}

HybridModel read_binary(std::istream& is) {
    auto get = [&](auto& v) {
        is.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!is) throw ParseError("truncated vertex file");
    };
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "NLDV", 4) != 0) throw ParseError("not a vertex file");
    std::uint32_t version, cells;
    std::int32_t n, m;
    std::uint8_t space, convention, packed, reserved;
    get(version);
    if (version != 1) throw ParseError("unsupported vertex file version");
    get(n);
    get(m);
    get(space);
    get(convention);
    get(packed);
    get(reserved);
    get(cells);
    if (space > 2 || convention > 2 || cells > 64) throw ParseError("corrupt vertex file header");
    CardinalityTuple h(cells);
    for (auto& c : h) get(c);
    std::uint64_t rows, dim;
    std::int64_t denominator;
    get(rows);
    get(dim);
    get(denominator);
    const Scenario s(n, m);
    if (dim != space_dimension(s, static_cast<Space>(space))) throw ParseError("vertex file dimension mismatch");
    if (packed) {
        std::vector<std::uint64_t> w(rows);
        is.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(rows * sizeof(std::uint64_t)));
        if (!is) throw ParseError("truncated vertex file");
        return HybridModel(s, h, static_cast<Space>(space), static_cast<MarginalConvention>(convention), std::move(w));
    }
    std::vector<std::int32_t> d(rows * dim);
    is.read(reinterpret_cast<char*>(d.data()), static_cast<std::streamsize>(d.size() * sizeof(std::int32_t)));
    if (!is) throw ParseError("truncated vertex file");
    return HybridModel(s, h, static_cast<Space>(space), static_cast<MarginalConvention>(convention), std::move(d), denominator);
}

nlohmann::json to_json(const HybridModel& model) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < model.size(); ++i) rows.push_back(model.row(i));
    return {{"n", model.scenario().parties},
            {"m", model.scenario().settings},
            {"space", std::string(to_string(model.space()))},
            {"convention", std::string(to_string(model.convention()))},
            {"h", model.h()},
            {"denominator", model.denominator()},
            {"vertices", std::move(rows)}};
}

}  // namespace nld
