#include "nld/cpt.hpp"
#include "nld/errors.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace nld {

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(p & kPrime) + static_cast<std::uint64_t>(p >> 61);
    if (r >= kPrime) r -= kPrime;
    return r;
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1u) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t to_mod(std::int64_t v) {
    const std::int64_t m = v % static_cast<std::int64_t>(kPrime);
    return static_cast<std::uint64_t>(m < 0 ? m + static_cast<std::int64_t>(kPrime) : m);
}

std::uint64_t to_mod(const Integer& v) {
    Integer m = v % Integer(kPrime);
    if (m < 0) m += Integer(kPrime);
    return m.convert_to<std::uint64_t>();
}

// Incremental row echelon form modulo kPrime.
class ModBasis {
public:
    explicit ModBasis(std::size_t dim) : dim_(dim) {}
    bool add(std::vector<std::uint64_t> row) {
        for (std::size_t b = 0; b < rows_.size(); ++b) {
            const std::uint64_t f = row[pivot_[b]];
            if (f == 0) continue;
            for (std::size_t c = 0; c < dim_; ++c)
                row[c] = (row[c] + kPrime - mulmod(f, rows_[b][c])) % kPrime;
        }
        std::size_t piv = 0;
        while (piv < dim_ && row[piv] == 0) ++piv;
        if (piv == dim_) return false;
        const std::uint64_t inv = powmod(row[piv], kPrime - 2);
        for (auto& x : row) x = mulmod(x, inv);
        rows_.push_back(std::move(row));
        pivot_.push_back(piv);
        return true;
    }
    std::size_t rank() const { return rows_.size(); }

private:
    std::size_t dim_;
    std::vector<std::vector<std::uint64_t>> rows_;
    std::vector<std::size_t> pivot_;
};

// Integer basis of the rational null space of the given rows.
std::vector<std::vector<Integer>> null_space(const std::vector<std::vector<Integer>>& rows, std::size_t dim) {
    std::vector<std::vector<Rational>> m;
    for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < dim && lead < m.size(); ++c) {
        std::size_t piv = lead;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[lead]);
        const Rational inv = 1 / m[lead][c];
        for (auto& x : m[lead]) x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == lead || m[r][c] == 0) continue;
            const Rational f = m[r][c];
            for (std::size_t k = 0; k < dim; ++k) m[r][k] -= f * m[lead][k];
        }
        pivots.push_back(c);
        ++lead;
    }
    std::vector<std::vector<Integer>> out;
    for (std::size_t free = 0; free < dim; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        std::vector<Rational> v(dim);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
        out.push_back(to_primitive_integers(v));
    }
    return out;
}

// Exact rank of a set of integer rows (given as int64 or Integer), stopping at `needed`.
template <class Row>
std::size_t certified_rank(const std::vector<Row>& rows, std::size_t dim, std::size_t needed) {
    ModBasis basis(dim);
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < rows.size() && basis.rank() < needed; ++i) {
        std::vector<std::uint64_t> r(dim);
        for (std::size_t c = 0; c < dim; ++c) r[c] = to_mod(rows[i][c]);
        if (basis.add(std::move(r))) chosen.push_back(i);
    }
    // rank over Q is at least the modular rank; settle the remaining gap exactly
    if (basis.rank() >= needed) return basis.rank();
    std::vector<std::vector<Integer>> exact;
    for (std::size_t i : chosen) exact.emplace_back(rows[i].begin(), rows[i].end());
    bool grew = true;
    while (grew && exact.size() < needed) {
        grew = false;
        const auto ns = null_space(exact, dim);
        for (std::size_t i = 0; i < rows.size() && !grew; ++i) {
            for (const auto& v : ns) {
                Integer s = 0;
                for (std::size_t c = 0; c < dim; ++c) s += v[c] * Integer(rows[i][c]);
                if (s != 0) {
                    exact.emplace_back(rows[i].begin(), rows[i].end());
                    grew = true;
                    break;
                }
            }
        }
    }
    return exact.size();
}

}  // namespace

Cone project_symmetric(const HybridModel& model) {
    if (model.space() == Space::Probability) throw InvalidArgument("projection needs a correlator space");
    const MultisetIndex index(model.scenario(), model.space());
    const auto proj = symmetric_projection(model, index);
    const std::size_t k = index.size();
    std::vector<std::vector<std::int64_t>> rows;
    rows.reserve(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        std::vector<std::int64_t> r(k + 1);
        r[0] = model.denominator();
        std::copy_n(proj.begin() + static_cast<std::ptrdiff_t>(i * k), k, r.begin() + 1);
        rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    Cone cone{k + 1, {}};
    cone.rays.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<Integer> v(r.begin(), r.end());
        reduce_by_gcd(v);
        cone.rays.push_back(std::move(v));
    }
    std::sort(cone.rays.begin(), cone.rays.end());
    cone.rays.erase(std::unique(cone.rays.begin(), cone.rays.end()), cone.rays.end());
    return cone;
}

Cone full_cone(const HybridModel& model) {
    Cone cone{model.dimension() + 1, {}};
    cone.rays.reserve(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        const auto r = model.row(i);
        std::vector<Integer> v(r.size() + 1);
        v[0] = model.denominator();
        for (std::size_t t = 0; t < r.size(); ++t) v[t + 1] = r[t];
        cone.rays.push_back(std::move(v));
    }
    return cone;
}

LiftCertificate lift_check(const std::vector<Integer>& normal, const Cone& full) {
    if (normal.size() != full.dim) throw DimensionMismatch("normal does not match the cone");
    std::vector<std::vector<Integer>> sat;
    for (const auto& r : full.rays) {
        Integer s = 0;
        for (std::size_t c = 0; c < full.dim; ++c) s += normal[c] * r[c];
        if (s < 0) throw InvalidArgument("inequality is not valid on the cone");
        if (s == 0) sat.push_back(r);
    }
    LiftCertificate cert;
    cert.needed = full.dim - 1;
    cert.saturating = sat.size();
    cert.rank = certified_rank(sat, full.dim, cert.needed);
    cert.facet = cert.rank == cert.needed;
    return cert;
}

LiftCertificate lift_check(const SymmetricInequality& ineq, const HybridModel& model) {
    const auto values = vertex_values(ineq, model);
    std::vector<std::vector<std::int64_t>> sat;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0) throw InvalidArgument("inequality is not valid on the model");
        if (values[i] != 0) continue;
        const auto r = model.row(i);
        std::vector<std::int64_t> v(r.size() + 1);
        v[0] = model.denominator();
        std::copy(r.begin(), r.end(), v.begin() + 1);
        sat.push_back(std::move(v));
    }
    LiftCertificate cert;
    cert.needed = model.dimension();
    cert.saturating = sat.size();
    cert.rank = certified_rank(sat, model.dimension() + 1, cert.needed);
    cert.facet = cert.rank == cert.needed;
    return cert;
}

bool is_trivial_facet(const SymmetricInequality& ineq) {
    return std::count_if(ineq.coeffs().begin(), ineq.coeffs().end(),
                         [](const Rational& c) { return c != 0; }) <= 1;
}

std::vector<CatalogEntry> enumerate_facets(const HybridModel& model, const FacetOptions& options) {
    const Cone cone = project_symmetric(model);
    const auto facets = dd_facets(cone);
    struct Class {
        std::size_t first;
        std::size_t count = 0;
    };
    std::map<std::vector<Rational>, std::pair<SymmetricInequality, Class>> classes;
    for (std::size_t f = 0; f < facets.size(); ++f) {
        const auto& nrm = facets[f].normal;
        std::vector<Rational> coeffs(nrm.begin() + 1, nrm.end());
        SymmetricInequality ineq(model.scenario(), model.space(), Rational(nrm[0]), std::move(coeffs));
        if (is_trivial_facet(ineq)) continue;
        auto canon = canonicalize(ineq, options.group);
        std::vector<Rational> key = canon.coeffs();
        key.insert(key.begin(), canon.constant());
        auto it = classes.find(key);
        if (it == classes.end()) it = classes.emplace(key, std::make_pair(canon, Class{f})).first;
        ++it->second.second.count;
    }
    std::vector<CatalogEntry> out;
    for (auto& [key, value] : classes) {
        auto& [ineq, cls] = value;
        CatalogEntry e{ineq, 0, cone.dim, cls.count, std::nullopt};
        std::vector<std::vector<Integer>> sat;
        for (std::size_t i : facets[cls.first].saturating) sat.push_back(cone.rays[i]);
        e.projected_rank = exact_rank(sat);
        if (options.compute_lift || options.require_lift) e.lift = lift_check(ineq, model);
        if (options.require_lift && !e.lift->facet) continue;
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<CatalogEntry> enumerate_facets(const Scenario& s, const CardinalityTuple& h,
                                           const FacetOptions& options) {
    return enumerate_facets(extremal_behaviors(s, h, Space::FullCorrelation, options.model), options);
}

void write_matrix(std::ostream& os, const std::vector<std::vector<Integer>>& rows,
                  const std::string& representation, const std::string& comment) {
    if (representation != "V-representation" && representation != "H-representation")
        throw InvalidArgument("representation must be V- or H-representation");
    std::istringstream lines(comment);
    for (std::string line; std::getline(lines, line);) os << "* " << line << '\n';
    os << representation << "\nbegin\n";
    os << ' ' << rows.size() << ' ' << (rows.empty() ? 0 : rows.front().size()) << " integer\n";
    for (const auto& r : rows) {
        for (const auto& x : r) os << ' ' << x;
        os << '\n';
    }
    os << "end\n";
}

MatrixFile read_matrix(std::istream& is) {
    MatrixFile out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '*') continue;
        if (line.rfind("V-representation", 0) == 0 || line.rfind("H-representation", 0) == 0) {
            out.representation = line.substr(0, 16);
            continue;
        }
        if (line.rfind("begin", 0) == 0) break;
    }
    if (!is) throw ParseError("matrix file has no 'begin'");
    std::size_t rows = 0, cols = 0;
    std::string type;
    if (!(is >> rows >> cols >> type)) throw ParseError("bad matrix size line");
    if (type != "integer" && type != "rational") throw ParseError("unsupported number type '" + type + "'");
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<Integer> r(cols);
        for (auto& x : r) {
            std::string tok;
            if (!(is >> tok)) throw ParseError("matrix file truncated");
            const Rational q = parse_rational(tok);
            if (denominator_of(q) != 1) throw ParseError("non-integer matrix entry " + tok);
            x = numerator_of(q);
        }
        out.rows.push_back(std::move(r));
    }
    std::string end;
    if (!(is >> end) || end != "end") throw ParseError("matrix file missing 'end'");
    return out;
}

}  // namespace nld
