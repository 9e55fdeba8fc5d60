#include "aggnet/network.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aggnet/rng.hpp"

namespace aggnet {

void Network::validate() const {
    if (n < 0)
        throw InputError("network: negative agent count");
    if (int(neighbors.size()) != n + 1 || int(signal_links.size()) != n + 1)
        throw InputError("network: container sizes do not match n");
    for (int i = 1; i <= n; ++i) {
        int prev = 0;
        for (int j : neighbors[size_t(i)]) {
            if (j < 1 || j >= i)
                throw InputError("network: agent " + std::to_string(i) +
                                 " observes out-of-range agent " + std::to_string(j));
            if (j <= prev)
                throw InputError("network: agent " + std::to_string(i) +
                                 " has an unsorted or duplicate neighbor list");
            prev = j;
        }
        int s = signal_links[size_t(i)];
        if (s != 0 && (s < 1 || s >= i))
            throw InputError("network: agent " + std::to_string(i) +
                             " has an out-of-range signal link");
    }
}

std::string kind_name(NetKind k) {
    switch (k) {
    case NetKind::general: return "general";
    case NetKind::maximal: return "maximal";
    case NetKind::silo: return "silo";
    case NetKind::mentorship: return "mentorship";
    }
    return "general";
}

NetKind kind_parse(const std::string& s) {
    if (s == "general") return NetKind::general;
    if (s == "maximal") return NetKind::maximal;
    if (s == "silo") return NetKind::silo;
    if (s == "mentorship") return NetKind::mentorship;
    throw InputError("unknown network kind: " + s);
}

void GenerationsSpec::validate() const {
    if (K < 1)
        throw InputError("generations spec: K must be at least 1");
    if (generations < 1)
        throw InputError("generations spec: horizon must be at least 1");
    if (int(psi.size()) != K)
        throw InputError("generations spec: psi must list one set per position");
    for (int k = 0; k < K; ++k) {
        if (psi[size_t(k)].empty())
            throw InputError("generations spec: empty observation set at position " +
                             std::to_string(k + 1));
        int prev = 0;
        for (int p : psi[size_t(k)]) {
            if (p < 1 || p > K)
                throw InputError("generations spec: position " + std::to_string(p) +
                                 " out of range");
            if (p <= prev)
                throw InputError("generations spec: unsorted or duplicate entries in psi");
            prev = p;
        }
    }
}

Network build_generations(const GenerationsSpec& spec) {
    spec.validate();
    int K = spec.K, T = spec.generations;
    Network net;
    net.n = K * T;
    net.neighbors.assign(size_t(net.n) + 1, {});
    net.signal_links.assign(size_t(net.n) + 1, 0);
    for (int t = 2; t <= T; ++t) {
        for (int k = 1; k <= K; ++k) {
            int i = (t - 1) * K + k;
            auto& nb = net.neighbors[size_t(i)];
            for (int p : spec.psi[size_t(k - 1)])
                nb.push_back((t - 2) * K + p);
        }
    }
    return net;
}

GenerationsSpec make_maximal_spec(int K, int T) {
    GenerationsSpec spec;
    spec.K = K;
    spec.generations = T;
    spec.kind = NetKind::maximal;
    std::vector<int> all(size_t(std::max(K, 0)));
    std::iota(all.begin(), all.end(), 1);
    spec.psi.assign(size_t(std::max(K, 0)), all);
    return spec;
}

Network build_maximal(int K, int T) { return build_generations(make_maximal_spec(K, T)); }

std::vector<std::vector<int>> silo_psi(int K,
                                       const std::vector<std::vector<int>>& partition) {
    if (K < 2)
        throw InputError("silo: K must be at least 2");
    std::vector<int> owner(size_t(K) + 1, -1);
    for (int s = 0; s < int(partition.size()); ++s) {
        if (partition[size_t(s)].empty())
            throw InputError("silo: empty silo in partition");
        for (int p : partition[size_t(s)]) {
            if (p < 2 || p > K)
                throw InputError("silo: position " + std::to_string(p) +
                                 " outside {2,...,K}");
            if (owner[size_t(p)] != -1)
                throw InputError("silo: position " + std::to_string(p) +
                                 " appears in two silos");
            owner[size_t(p)] = s;
        }
    }
    for (int p = 2; p <= K; ++p)
        if (owner[size_t(p)] == -1)
            throw InputError("silo: position " + std::to_string(p) + " not covered");

    std::vector<std::vector<int>> psi;
    psi.resize(size_t(K));
    psi[0].resize(size_t(K - 1));
    std::iota(psi[0].begin(), psi[0].end(), 2);
    for (const auto& s : partition) {
        std::vector<int> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        for (int p : s)
            psi[size_t(p - 1)] = sorted;
    }
    return psi;
}

GenerationsSpec make_silo_spec(int K, const std::vector<std::vector<int>>& partition,
                               int T) {
    GenerationsSpec spec;
    spec.K = K;
    spec.generations = T;
    spec.kind = NetKind::silo;
    spec.partition = partition;
    spec.psi = silo_psi(K, partition);
    return spec;
}

Network build_silo(int K, const std::vector<std::vector<int>>& partition, int T) {
    return build_generations(make_silo_spec(K, partition, T));
}

GenerationsSpec make_mentorship_spec(int K, int T) {
    GenerationsSpec spec = make_maximal_spec(K, T);
    spec.kind = NetKind::mentorship;
    return spec;
}

Network build_mentorship(int K, int T) {
    Network net = build_maximal(K, T);
    // position-matched mentor: [t,k] also sees the private signal of [t-1,k]
    for (int t = 2; t <= T; ++t)
        for (int k = 1; k <= K; ++k)
            net.signal_links[size_t((t - 1) * K + k)] = (t - 2) * K + k;
    return net;
}

Network expand_spec(const GenerationsSpec& spec) {
    switch (spec.kind) {
    case NetKind::mentorship: {
        spec.validate();
        return build_mentorship(spec.K, spec.generations);
    }
    case NetKind::silo:
        return build_silo(spec.K, spec.partition, spec.generations);
    default:
        return build_generations(spec);
    }
}

Network sample_fixed_degree(const RandomNetSpec& spec) {
    if (spec.d < 2)
        throw InputError("random network: degree must be at least 2");
    if (spec.n < 1)
        throw InputError("random network: need at least one agent");
    Philox rng(spec.seed, spec.stream);
    Network net;
    net.n = spec.n;
    net.neighbors.assign(size_t(spec.n) + 1, {});
    net.signal_links.assign(size_t(spec.n) + 1, 0);
    for (int i = 2; i <= spec.n; ++i) {
        if (i - 1 <= spec.d) {
            auto& nb = net.neighbors[size_t(i)];
            nb.resize(size_t(i - 1));
            std::iota(nb.begin(), nb.end(), 1);
        } else {
            net.neighbors[size_t(i)] = sample_subset(rng, i - 1, spec.d);
        }
    }
    return net;
}

SymmetryReport validate_symmetry(const GenerationsSpec& spec) {
    spec.validate();
    int K = spec.K;
    SymmetryReport rep;

    int d = int(spec.psi[0].size());
    bool equal_d = true;
    for (const auto& s : spec.psi)
        equal_d = equal_d && int(s.size()) == d;

    int c = d; // K=1 convention: the maximal chain has d = c = K = 1
    bool equal_c = true;
    if (K > 1) {
        c = -1;
        for (int a = 0; a < K && equal_c; ++a)
            for (int b = a + 1; b < K && equal_c; ++b) {
                std::vector<int> inter;
                std::set_intersection(spec.psi[size_t(a)].begin(), spec.psi[size_t(a)].end(),
                                      spec.psi[size_t(b)].begin(), spec.psi[size_t(b)].end(),
                                      std::back_inserter(inter));
                int overlap = int(inter.size());
                if (c == -1)
                    c = overlap;
                else if (overlap != c)
                    equal_c = false;
            }
    }

    rep.is_symmetric = equal_d && equal_c;
    if (rep.is_symmetric) {
        rep.d = d;
        rep.c = c;
        if (d >= 2 && c >= 1 && c < d)
            rep.design_consistent = (int64_t(c) * (K - 1) == int64_t(d) * (d - 1));
    }

    // reachability of every position from every position (>= 1 step) on the
    // position graph with edges k1 -> k2 iff k2 in psi[k1]
    bool strong = true;
    for (int start = 1; start <= K && strong; ++start) {
        std::vector<char> seen(size_t(K) + 1, 0);
        std::vector<int> queue;
        for (int p : spec.psi[size_t(start - 1)])
            if (!seen[size_t(p)]) {
                seen[size_t(p)] = 1;
                queue.push_back(p);
            }
        for (size_t q = 0; q < queue.size(); ++q)
            for (int p : spec.psi[size_t(queue[q] - 1)])
                if (!seen[size_t(p)]) {
                    seen[size_t(p)] = 1;
                    queue.push_back(p);
                }
        for (int k = 1; k <= K; ++k)
            strong = strong && seen[size_t(k)];
    }
    rep.strongly_connected = strong;
    return rep;
}

std::vector<int> longest_paths(const Network& net) {
    std::vector<int> pl(size_t(net.n) + 1, 0);
    for (int i = 1; i <= net.n; ++i)
        for (int j : net.neighbors[size_t(i)])
            pl[size_t(i)] = std::max(pl[size_t(i)], pl[size_t(j)] + 1);
    return pl;
}

std::vector<int> expanding_obs_series(const Network& net) {
    std::vector<int> m(size_t(net.n) + 1, 0);
    for (int i = 1; i <= net.n; ++i)
        if (!net.neighbors[size_t(i)].empty())
            m[size_t(i)] = net.neighbors[size_t(i)].back();
    return m;
}

namespace {

nlohmann::json parse_json(const std::string& text, const char* what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw InputError(std::string(what) + ": malformed JSON");
    return j;
}

std::vector<std::vector<int>> int_lists(const nlohmann::json& j, const char* what) {
    if (!j.is_array())
        throw InputError(std::string(what) + " must be an array of arrays");
    std::vector<std::vector<int>> out;
    for (const auto& row : j) {
        if (!row.is_array())
            throw InputError(std::string(what) + " must be an array of arrays");
        std::vector<int> r;
        for (const auto& v : row) {
            if (!v.is_number_integer())
                throw InputError(std::string(what) + " entries must be integers");
            r.push_back(v.get<int>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

Network network_from_json(const std::string& text) {
    auto j = parse_json(text, "network");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw InputError("network: missing integer field n");
    Network net;
    net.n = j["n"].get<int>();
    if (net.n < 0)
        throw InputError("network: n must be nonnegative");
    if (!j.contains("neighbors"))
        throw InputError("network: missing neighbors");
    auto lists = int_lists(j["neighbors"], "network neighbors");
    if (int(lists.size()) != net.n)
        throw InputError("network: neighbors must have one list per agent");
    net.neighbors.assign(size_t(net.n) + 1, {});
    for (int i = 1; i <= net.n; ++i) {
        net.neighbors[size_t(i)] = lists[size_t(i - 1)];
        std::sort(net.neighbors[size_t(i)].begin(), net.neighbors[size_t(i)].end());
    }
    net.signal_links.assign(size_t(net.n) + 1, 0);
    if (j.contains("signal_links")) {
        const auto& sl = j["signal_links"];
        if (!sl.is_array() || int(sl.size()) != net.n)
            throw InputError("network: signal_links must have one entry per agent");
        for (int i = 1; i <= net.n; ++i) {
            if (!sl[size_t(i - 1)].is_number_integer())
                throw InputError("network: signal_links entries must be integers");
            net.signal_links[size_t(i)] = sl[size_t(i - 1)].get<int>();
        }
    }
    net.validate();
    return net;
}

std::string network_to_json(const Network& net) {
    nlohmann::json j;
    j["n"] = net.n;
    auto nb = nlohmann::json::array();
    auto sl = nlohmann::json::array();
    for (int i = 1; i <= net.n; ++i) {
        nb.push_back(net.neighbors[size_t(i)]);
        sl.push_back(net.signal_links[size_t(i)]);
    }
    j["neighbors"] = std::move(nb);
    j["signal_links"] = std::move(sl);
    return j.dump(2) + "\n";
}

GenerationsSpec spec_from_json(const std::string& text) {
    auto j = parse_json(text, "generations spec");
    GenerationsSpec spec;
    if (!j.contains("K") || !j["K"].is_number_integer())
        throw InputError("generations spec: missing integer field K");
    spec.K = j["K"].get<int>();
    if (!j.contains("generations") || !j["generations"].is_number_integer())
        throw InputError("generations spec: missing integer field generations");
    spec.generations = j["generations"].get<int>();
    spec.kind = j.contains("kind") ? kind_parse(j["kind"].get<std::string>())
                                   : NetKind::general;
    if (j.contains("partition"))
        spec.partition = int_lists(j["partition"], "generations spec partition");

    bool have_psi = j.contains("psi");
    if (have_psi)
        spec.psi = int_lists(j["psi"], "generations spec psi");
    for (auto& s : spec.psi)
        std::sort(s.begin(), s.end());

    if (spec.kind == NetKind::silo) {
        if (spec.partition.empty())
            throw InputError("generations spec: silo kind requires a partition");
        auto derived = silo_psi(spec.K, spec.partition);
        if (have_psi && spec.psi != derived)
            throw InputError("generations spec: psi inconsistent with silo partition");
        spec.psi = std::move(derived);
    } else if (spec.kind == NetKind::maximal || spec.kind == NetKind::mentorship) {
        auto derived = make_maximal_spec(spec.K, spec.generations).psi;
        if (have_psi && spec.psi != derived)
            throw InputError("generations spec: psi inconsistent with kind " +
                             kind_name(spec.kind));
        spec.psi = std::move(derived);
    } else if (!have_psi) {
        throw InputError("generations spec: general kind requires psi");
    }
    spec.validate();
    return spec;
}

std::string spec_to_json(const GenerationsSpec& spec) {
    nlohmann::json j;
    j["K"] = spec.K;
    j["psi"] = spec.psi;
    j["generations"] = spec.generations;
    j["kind"] = kind_name(spec.kind);
    if (!spec.partition.empty())
        j["partition"] = spec.partition;
    return j.dump(2) + "\n";
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

Network load_network(const std::string& path) { return network_from_json(slurp(path)); }

GenerationsSpec load_spec(const std::string& path) { return spec_from_json(slurp(path)); }

} // namespace aggnet
