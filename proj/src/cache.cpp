#include "thetaspan/cache.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "thetaspan/errors.hpp"

namespace thetaspan {

namespace {

constexpr char kMagic[8] = {'T', 'S', 'P', 'A', 'N', 'C', 'A', 'C'};
constexpr std::uint8_t kKindGenerators = 1;
constexpr std::uint8_t kKindSpanBasis = 2;

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    void u8(std::uint8_t v) { os_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) os_.put(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) os_.put(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void raw(const void* p, std::size_t n) { os_.write(static_cast<const char*>(p), n); }
    void mpz(const mpz_class& v) {
        const int s = sgn(v);
        u8(static_cast<std::uint8_t>(s + 1)); // 0, 1, 2
        if (s == 0) {
            u64(0);
            return;
        }
        const std::size_t nbytes = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
        std::vector<unsigned char> buf(nbytes);
        std::size_t written = 0;
        mpz_export(buf.data(), &written, -1, 1, 0, 0, v.get_mpz_t());
        u64(written);
        raw(buf.data(), written);
    }

private:
    std::ostream& os_;
};

class Reader {
public:
    explicit Reader(std::istream& is) : is_(is) {}

    std::uint8_t u8() {
        int c = is_.get();
        if (c == EOF) fail();
        return static_cast<std::uint8_t>(c);
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    void raw(void* p, std::size_t n) {
        is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(is_.gcount()) != n) fail();
    }
    mpz_class mpz() {
        const int s = static_cast<int>(u8()) - 1;
        if (s < -1 || s > 1) fail();
        const std::uint64_t n = u64();
        if (s == 0) {
            if (n != 0) fail();
            return 0;
        }
        if (n > (1ull << 30)) fail(); // sanity cap
        std::vector<unsigned char> buf(n);
        raw(buf.data(), n);
        mpz_class v;
        mpz_import(v.get_mpz_t(), n, -1, 1, 0, 0, buf.data());
        if (s < 0) v = -v;
        return v;
    }

    [[noreturn]] void fail() { throw CacheError("cache file is truncated or malformed"); }

private:
    std::istream& is_;
};

// Header behind the magic: version, kind, pivot rule, p, L.
// Returns false on a key mismatch (miss), throws CacheError on malformed data.
bool check_header(Reader& r, std::uint8_t kind, std::uint64_t p, std::uint64_t length) {
    const std::uint8_t version = r.u8();
    const std::uint8_t k = r.u8();
    const std::uint8_t rule = r.u8();
    const std::uint64_t fp = r.u64();
    const std::uint64_t fl = r.u64();
    return version == kCacheFormatVersion && k == kind && rule == kPivotRuleId &&
           fp == p && fl == length;
}

void write_header(Writer& w, std::uint8_t kind, std::uint64_t p, std::uint64_t length) {
    w.raw(kMagic, sizeof kMagic);
    w.u8(kCacheFormatVersion);
    w.u8(kind);
    w.u8(kPivotRuleId);
    w.u64(p);
    w.u64(length);
}

bool open_and_check(std::ifstream& is, const std::filesystem::path& file,
                    std::uint8_t kind, std::uint64_t p, std::uint64_t length) {
    is.open(file, std::ios::binary);
    if (!is) return false; // absent: plain miss
    char magic[8];
    is.read(magic, 8);
    if (is.gcount() != 8 || std::memcmp(magic, kMagic, 8) != 0)
        throw CacheError("cache file has a bad magic header: " + file.string());
    Reader r(is);
    return check_header(r, kind, p, length);
}

void atomic_write(const std::filesystem::path& file, const std::string& payload) {
    std::filesystem::create_directories(file.parent_path());
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        if (!os) throw CacheError("failed to write cache file: " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

void write_cert(Writer& w, RankCertificate::Method method,
                const std::vector<std::uint64_t>& primes) {
    w.u8(method == RankCertificate::Method::FractionFree ? 1 : 0);
    w.u64(primes.size());
    for (std::uint64_t q : primes) w.u64(q);
}

void read_cert(Reader& r, RankCertificate::Method& method,
               std::vector<std::uint64_t>& primes) {
    method = r.u8() == 1 ? RankCertificate::Method::FractionFree
                         : RankCertificate::Method::ModularAgreed;
    const std::uint64_t n = r.u64();
    if (n > 4096) r.fail();
    primes.resize(n);
    for (auto& q : primes) q = r.u64();
}

} // namespace

std::filesystem::path generator_cache_path(const std::filesystem::path& dir,
                                           std::uint64_t p, std::uint64_t length) {
    std::ostringstream os;
    os << "gens_p" << p << "_L" << length << "_r" << int(kPivotRuleId) << "_v"
       << int(kCacheFormatVersion) << ".bin";
    return dir / os.str();
}

std::filesystem::path basis_cache_path(const std::filesystem::path& dir, std::uint64_t p,
                                       std::uint64_t length, std::uint32_t k) {
    std::ostringstream os;
    os << "basis_p" << p << "_L" << length << "_k" << k << "_r" << int(kPivotRuleId)
       << "_v" << int(kCacheFormatVersion) << ".bin";
    return dir / os.str();
}

std::optional<GeneratorSet> load_generator_set(const std::filesystem::path& dir,
                                               std::uint64_t p, std::uint64_t length) {
    std::ifstream is;
    if (!open_and_check(is, generator_cache_path(dir, p, length), kKindGenerators, p,
                        length))
        return std::nullopt;
    Reader r(is);
    GeneratorSet gs;
    gs.p = p;
    gs.length = length;
    const std::uint64_t n = r.u64();
    if (n != 3 * (p + 1)) r.fail();
    for (std::uint64_t i = 0; i < n; ++i) {
        GeneratorLabel label;
        const std::uint8_t form = r.u8();
        if (form > 2) r.fail();
        label.form = static_cast<BaseForm>(form);
        const std::uint64_t twist = r.u64();
        if (twist != ~0ull) {
            if (twist >= p) r.fail();
            label.twist = static_cast<std::uint32_t>(twist);
        }
        gs.labels.push_back(label);
    }
    const std::uint32_t den = static_cast<std::uint32_t>(4 * p);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint32_t cls = r.u32();
        if (cls >= den) r.fail();
        QExpansion e(den, length, cls);
        const std::uint64_t slots = r.u64();
        if (slots != e.data().size()) r.fail();
        auto dst = e.mutable_data();
        for (std::uint64_t j = 0; j < slots; ++j) dst[j] = r.mpz();
        gs.expansions.push_back(std::move(e));
    }
    const std::uint64_t nb = r.u64();
    if (nb > n) r.fail();
    gs.basis_indices.resize(nb);
    for (auto& idx : gs.basis_indices) {
        idx = r.u64();
        if (idx >= n) r.fail();
    }
    gs.dim = r.u64();
    if (gs.dim != nb) r.fail();
    const std::uint64_t nblk = r.u64();
    if (nblk > den) r.fail();
    for (std::uint64_t i = 0; i < nblk; ++i) {
        const std::uint32_t cls = r.u32();
        gs.block_ranks[cls] = r.u64();
    }
    read_cert(r, gs.cert_method, gs.primes_used);
    return gs;
}

void store_generator_set(const std::filesystem::path& dir, const GeneratorSet& gs) {
    std::ostringstream payload(std::ios::binary);
    Writer w(payload);
    write_header(w, kKindGenerators, gs.p, gs.length);
    w.u64(gs.labels.size());
    for (const auto& label : gs.labels) {
        w.u8(static_cast<std::uint8_t>(label.form));
        w.u64(label.twist ? *label.twist : ~0ull);
    }
    for (const auto& e : gs.expansions) {
        w.u32(*e.support_class());
        w.u64(e.data().size());
        for (const auto& c : e.data()) w.mpz(c);
    }
    w.u64(gs.basis_indices.size());
    for (std::size_t idx : gs.basis_indices) w.u64(idx);
    w.u64(gs.dim);
    w.u64(gs.block_ranks.size());
    for (const auto& [cls, rank] : gs.block_ranks) {
        w.u32(cls);
        w.u64(rank);
    }
    write_cert(w, gs.cert_method, gs.primes_used);
    atomic_write(generator_cache_path(dir, gs.p, gs.length), payload.str());
}

std::optional<CachedSpanBasis> load_span_basis(const std::filesystem::path& dir,
                                               std::uint64_t p, std::uint64_t length,
                                               std::uint32_t k) {
    std::ifstream is;
    if (!open_and_check(is, basis_cache_path(dir, p, length, k), kKindSpanBasis, p,
                        length))
        return std::nullopt;
    Reader r(is);
    CachedSpanBasis cb;
    cb.k = r.u32();
    if (cb.k != k) return std::nullopt;
    cb.dim = r.u64();
    cb.candidate_count = r.u64();
    const std::uint64_t nblk = r.u64();
    if (nblk > 4 * p) r.fail();
    for (std::uint64_t i = 0; i < nblk; ++i) {
        const std::uint32_t cls = r.u32();
        cb.per_block_dims[cls] = r.u64();
    }
    const std::uint64_t nm = r.u64();
    const std::uint64_t d = r.u64();
    if (nm != cb.dim || d > 3 * (p + 1)) r.fail();
    cb.basis_monomials.resize(nm);
    for (auto& mono : cb.basis_monomials) {
        mono.e.resize(d);
        for (auto& x : mono.e) x = r.u32();
    }
    read_cert(r, cb.cert_method, cb.primes_used);
    return cb;
}

void store_span_basis(const std::filesystem::path& dir, std::uint64_t p,
                      std::uint64_t length, const CachedSpanBasis& basis) {
    std::ostringstream payload(std::ios::binary);
    Writer w(payload);
    write_header(w, kKindSpanBasis, p, length);
    w.u32(basis.k);
    w.u64(basis.dim);
    w.u64(basis.candidate_count);
    w.u64(basis.per_block_dims.size());
    for (const auto& [cls, rank] : basis.per_block_dims) {
        w.u32(cls);
        w.u64(rank);
    }
    w.u64(basis.basis_monomials.size());
    w.u64(basis.basis_monomials.empty() ? 0 : basis.basis_monomials.front().e.size());
    for (const auto& mono : basis.basis_monomials)
        for (std::uint32_t x : mono.e) w.u32(x);
    write_cert(w, basis.cert_method, basis.primes_used);
    atomic_write(basis_cache_path(dir, p, length, basis.k), payload.str());
}

} // namespace thetaspan
