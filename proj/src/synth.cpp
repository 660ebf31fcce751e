#include "nids/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "nids/errors.hpp"
#include "nids/io_util.hpp"
#include "nids/rng.hpp"

namespace nids {

namespace {

constexpr const char* kProtocols[] = {"icmp", "tcp", "udp"};

constexpr const char* kServices[] = {
    "aol",        "auth",         "bgp",        "courier",    "csnet_ns",   "ctf",
    "daytime",    "discard",      "domain",     "domain_u",   "echo",       "eco_i",
    "ecr_i",      "efs",          "exec",       "finger",     "ftp",        "ftp_data",
    "gopher",     "harvest",      "hostnames",  "http",       "http_2784",  "http_443",
    "http_8001",  "imap4",        "IRC",        "iso_tsap",   "klogin",     "kshell",
    "ldap",       "link",         "login",      "mtp",        "name",       "netbios_dgm",
    "netbios_ns", "netbios_ssn",  "netstat",    "nnsp",       "nntp",       "ntp_u",
    "other",      "pm_dump",      "pop_2",      "pop_3",      "printer",    "private",
    "red_i",      "remote_job",   "rje",        "shell",      "smtp",       "sql_net",
    "ssh",        "sunrpc",       "supdup",     "systat",     "telnet",     "tftp_u",
    "tim_i",      "time",         "urh_i",      "urp_i",      "uucp",       "uucp_path",
    "vmnet",      "whois",        "X11",        "Z39_50"};

constexpr const char* kFlags[] = {"OTH", "REJ",    "RSTO", "RSTOS0", "RSTR", "S0",
                                  "S1",  "S2",     "S3",   "SF",     "SH"};

// Services absent from the generated test file, so the test vocabulary is a
// strict subset of the train vocabulary (as with the official files).
constexpr const char* kTestExcludedServices[] = {"aol",       "harvest", "http_2784",
                                                 "http_8001", "red_i",   "urh_i"};

enum Class { kDos = 0, kProbe = 1, kR2l = 2, kU2r = 3, kNormal = 4 };

struct WeightedLabel {
    const char* label;
    int weight;
};

const std::vector<WeightedLabel>& train_labels(int cls) {
    static const std::vector<WeightedLabel> dos = {{"neptune", 70}, {"smurf", 15}, {"back", 7},
                                                   {"teardrop", 5}, {"pod", 2},    {"land", 1}};
    static const std::vector<WeightedLabel> probe = {
        {"satan", 40}, {"ipsweep", 30}, {"portsweep", 20}, {"nmap", 10}};
    static const std::vector<WeightedLabel> r2l = {
        {"warezclient", 60}, {"guess_passwd", 20}, {"warezmaster", 8}, {"ftp_write", 4},
        {"imap", 4},         {"multihop", 2},      {"phf", 1},         {"spy", 1}};
    static const std::vector<WeightedLabel> u2r = {
        {"buffer_overflow", 60}, {"rootkit", 20}, {"loadmodule", 12}, {"perl", 8}};
    static const std::vector<WeightedLabel> normal = {{"normal", 1}};
    switch (cls) {
        case kDos: return dos;
        case kProbe: return probe;
        case kR2l: return r2l;
        case kU2r: return u2r;
        default: return normal;
    }
}

// Attack names that appear only in the test data, as in the official split.
const std::vector<WeightedLabel>& novel_test_labels(int cls) {
    static const std::vector<WeightedLabel> dos = {
        {"apache2", 4}, {"mailbomb", 3}, {"processtable", 2}, {"udpstorm", 1}};
    static const std::vector<WeightedLabel> probe = {{"mscan", 3}, {"saint", 2}};
    static const std::vector<WeightedLabel> r2l = {
        {"snmpgetattack", 4}, {"snmpguess", 3}, {"named", 2}, {"sendmail", 2},
        {"worm", 1},          {"xlock", 1},     {"xsnoop", 1}};
    static const std::vector<WeightedLabel> u2r = {
        {"httptunnel", 3}, {"ps", 2}, {"xterm", 2}, {"sqlattack", 1}};
    static const std::vector<WeightedLabel> none = {};
    switch (cls) {
        case kDos: return dos;
        case kProbe: return probe;
        case kR2l: return r2l;
        case kU2r: return u2r;
        default: return none;
    }
}

const char* pick_weighted(const std::vector<WeightedLabel>& options, Rng& rng) {
    int total = 0;
    for (const WeightedLabel& o : options) total += o.weight;
    auto roll = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(total)));
    for (const WeightedLabel& o : options) {
        roll -= o.weight;
        if (roll < 0) return o.label;
    }
    return options.back().label;
}

std::string rate(double v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", std::clamp(v, 0.0, 1.0));
    return buf;
}

std::string num(long v) { return std::to_string(v); }

long uniform_int(Rng& rng, long lo, long hi) {  // inclusive bounds
    return lo + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

const char* pick_service(int cls, Rng& rng, bool test_mode) {
    static const std::vector<WeightedLabel> normal = {{"http", 40},    {"smtp", 15},
                                                      {"ftp_data", 10}, {"domain_u", 10},
                                                      {"other", 10},    {"telnet", 5},
                                                      {"ftp", 5},       {"pop_3", 5}};
    static const std::vector<WeightedLabel> dos = {
        {"private", 40}, {"http", 30}, {"ecr_i", 20}, {"other", 10}};
    static const std::vector<WeightedLabel> r2l = {{"ftp", 30},   {"telnet", 20}, {"imap4", 15},
                                                   {"pop_3", 15}, {"login", 10},  {"ftp_data", 10}};
    static const std::vector<WeightedLabel> u2r = {{"telnet", 60}, {"ftp", 20}, {"shell", 20}};

    if (cls == kProbe) {
        // Scans touch arbitrary services; this is also what guarantees
        // vocabulary coverage in large generated files.
        static const std::vector<const char*> test_services = [] {
            std::set<std::string> excluded(std::begin(kTestExcludedServices),
                                           std::end(kTestExcludedServices));
            std::vector<const char*> out;
            for (const char* s : kServices) {
                if (!excluded.count(s)) out.push_back(s);
            }
            return out;
        }();
        if (test_mode) {
            return test_services[rng.next_below(test_services.size())];
        }
        return kServices[rng.next_below(std::size(kServices))];
    }
    switch (cls) {
        case kDos: return pick_weighted(dos, rng);
        case kR2l: return pick_weighted(r2l, rng);
        case kU2r: return pick_weighted(u2r, rng);
        default: return pick_weighted(normal, rng);
    }
}

// One 41-field feature vector with a class-conditional profile. The columns
// follow the connection-record layout: basic features, content features,
// time-based traffic features, then destination-host features.
std::vector<std::string> make_features(int cls, Rng& rng, bool test_mode) {
    std::vector<std::string> f(41);

    const char* protocol = "tcp";
    {
        const auto roll = rng.next_below(100);
        switch (cls) {
            case kDos: protocol = roll < 80 ? "tcp" : (roll < 95 ? "icmp" : "udp"); break;
            case kProbe: protocol = roll < 60 ? "tcp" : (roll < 90 ? "icmp" : "udp"); break;
            case kNormal: protocol = roll < 70 ? "tcp" : (roll < 95 ? "udp" : "icmp"); break;
            default: protocol = roll < 95 ? "tcp" : "udp"; break;
        }
    }
    const char* service = pick_service(cls, rng, test_mode);
    const char* flag = "SF";
    {
        const auto roll = rng.next_below(100);
        switch (cls) {
            case kDos: flag = roll < 70 ? "S0" : (roll < 95 ? "SF" : "RSTR"); break;
            case kProbe: flag = roll < 40 ? "REJ" : (roll < 65 ? "SF" : (roll < 85 ? "S0" : "RSTR")); break;
            case kR2l: flag = roll < 80 ? "SF" : (roll < 90 ? "RSTO" : "S1"); break;
            case kU2r: flag = roll < 95 ? "SF" : "S1"; break;
            default: flag = roll < 90 ? "SF" : (roll < 95 ? "REJ" : "RSTO"); break;
        }
    }

    const bool dos_open = cls == kDos && std::string(flag) == "S0";

    long duration = 0;
    switch (cls) {
        case kNormal: duration = rng.next_below(10) < 7 ? 0 : uniform_int(rng, 1, 120); break;
        case kR2l: duration = uniform_int(rng, 1, 300); break;
        case kU2r: duration = uniform_int(rng, 10, 200); break;
        case kProbe: duration = rng.next_below(10) < 6 ? 0 : uniform_int(rng, 1, 30); break;
        default: duration = 0; break;
    }

    long src_bytes = 0, dst_bytes = 0;
    switch (cls) {
        case kNormal:
            src_bytes = uniform_int(rng, 100, 5000);
            dst_bytes = uniform_int(rng, 100, 5000);
            break;
        case kDos:
            src_bytes = dos_open ? 0 : uniform_int(rng, 520, 1480);
            dst_bytes = 0;
            break;
        case kProbe:
            src_bytes = uniform_int(rng, 0, 20);
            dst_bytes = rng.next_below(10) < 8 ? 0 : uniform_int(rng, 1, 100);
            break;
        case kR2l:
            src_bytes = uniform_int(rng, 100, 2000);
            dst_bytes = uniform_int(rng, 100, 10000);
            break;
        default:
            src_bytes = uniform_int(rng, 100, 5000);
            dst_bytes = uniform_int(rng, 100, 5000);
            break;
    }

    f[0] = num(duration);
    f[1] = protocol;
    f[2] = service;
    f[3] = flag;
    f[4] = num(src_bytes);
    f[5] = num(dst_bytes);
    f[6] = num(cls == kDos && rng.next_below(100) < 2 ? 1 : 0);        // land
    f[7] = num(cls == kDos && rng.next_below(100) < 10
                   ? uniform_int(rng, 1, 3)
                   : 0);                                               // wrong_fragment
    f[8] = num(cls == kU2r && rng.next_below(100) < 5 ? 1 : 0);        // urgent

    // Content features.
    long hot = 0;
    switch (cls) {
        case kR2l: hot = uniform_int(rng, 2, 20); break;
        case kU2r: hot = uniform_int(rng, 10, 30); break;
        case kNormal: hot = rng.next_below(100) < 5 ? uniform_int(rng, 1, 2) : 0; break;
        default: hot = 0; break;
    }
    f[9] = num(hot);
    f[10] = num(cls == kR2l ? uniform_int(rng, 1, 5) : 0);  // num_failed_logins
    long logged_in = 0;
    switch (cls) {
        case kNormal: logged_in = rng.next_below(100) < 85 ? 1 : 0; break;
        case kR2l: logged_in = rng.next_below(100) < 40 ? 1 : 0; break;
        case kU2r: logged_in = rng.next_below(100) < 90 ? 1 : 0; break;
        default: logged_in = 0; break;
    }
    f[11] = num(logged_in);
    f[12] = num(cls == kU2r ? uniform_int(rng, 1, 5)
                            : (cls == kR2l ? uniform_int(rng, 0, 2) : 0));  // num_compromised
    f[13] = num(cls == kU2r && rng.next_below(100) < 90 ? 1 : 0);           // root_shell
    f[14] = num(cls == kU2r && rng.next_below(100) < 30 ? 2 : 0);           // su_attempted
    f[15] = num(cls == kU2r ? uniform_int(rng, 1, 10) : 0);                 // num_root
    f[16] = num(cls == kU2r ? uniform_int(rng, 1, 8) : 0);                  // num_file_creations
    f[17] = num(cls == kU2r ? uniform_int(rng, 0, 2) : 0);                  // num_shells
    f[18] = num(cls == kR2l ? uniform_int(rng, 0, 3)
                            : (cls == kU2r ? uniform_int(rng, 0, 2) : 0));  // num_access_files
    f[19] = "0";                                                            // num_outbound_cmds
    f[20] = "0";                                                            // is_host_login
    long guest = 0;
    if (cls == kR2l) guest = rng.next_below(100) < 40 ? 1 : 0;
    else if (cls == kNormal) guest = rng.next_below(100) < 3 ? 1 : 0;
    f[21] = num(guest);

    // Traffic features.
    long count = 1, srv_count = 1;
    switch (cls) {
        case kNormal: count = uniform_int(rng, 1, 40); break;
        case kDos: count = uniform_int(rng, 100, 511); break;
        case kProbe: count = uniform_int(rng, 1, 60); break;
        default: count = uniform_int(rng, 1, 5); break;
    }
    switch (cls) {
        case kDos: srv_count = count - uniform_int(rng, 0, count / 10); break;
        case kNormal: srv_count = std::max<long>(1, count - uniform_int(rng, 0, count / 2)); break;
        default: srv_count = uniform_int(rng, 1, std::max<long>(1, count / 4)); break;
    }
    f[22] = num(count);
    f[23] = num(srv_count);

    double serror = 0.0, rerror = 0.0;
    if (dos_open) serror = 0.95 + rng.next_double() * 0.05;
    else if (cls == kProbe) {
        if (std::string(flag) == "S0") serror = 0.2 + rng.next_double() * 0.5;
        if (std::string(flag) == "REJ" || std::string(flag) == "RSTR") {
            rerror = 0.6 + rng.next_double() * 0.4;
        }
    } else {
        serror = rng.next_double() * 0.05;
        rerror = rng.next_double() * 0.05;
    }
    f[24] = rate(serror);
    f[25] = rate(serror + (rng.next_double() - 0.5) * 0.04);
    f[26] = rate(rerror);
    f[27] = rate(rerror + (rng.next_double() - 0.5) * 0.04);

    double same_srv = 0.0, diff_srv = 0.0;
    switch (cls) {
        case kDos: same_srv = 0.9 + rng.next_double() * 0.1; diff_srv = rng.next_double() * 0.05; break;
        case kProbe: same_srv = 0.05 + rng.next_double() * 0.25; diff_srv = 0.5 + rng.next_double() * 0.5; break;
        case kNormal: same_srv = 0.7 + rng.next_double() * 0.3; diff_srv = rng.next_double() * 0.1; break;
        default: same_srv = 0.9 + rng.next_double() * 0.1; diff_srv = rng.next_double() * 0.1; break;
    }
    f[28] = rate(same_srv);
    f[29] = rate(diff_srv);
    f[30] = rate(cls == kProbe ? 0.2 + rng.next_double() * 0.6 : rng.next_double() * 0.2);

    // Destination-host features.
    long dh_count = 0, dh_srv_count = 0;
    switch (cls) {
        case kNormal:
            dh_count = uniform_int(rng, 1, 255);
            dh_srv_count = uniform_int(rng, 100, 255);
            break;
        case kDos:
            dh_count = 255;
            dh_srv_count = uniform_int(rng, 1, 25);
            break;
        case kProbe:
            dh_count = uniform_int(rng, 200, 255);
            dh_srv_count = uniform_int(rng, 1, 30);
            break;
        case kR2l:
            dh_count = uniform_int(rng, 1, 100);
            dh_srv_count = uniform_int(rng, 10, 150);
            break;
        default:
            dh_count = uniform_int(rng, 1, 50);
            dh_srv_count = uniform_int(rng, 1, 50);
            break;
    }
    f[31] = num(dh_count);
    f[32] = num(dh_srv_count);

    double dh_same_srv = 0.0;
    switch (cls) {
        case kNormal: dh_same_srv = 0.8 + rng.next_double() * 0.2; break;
        case kDos: dh_same_srv = rng.next_double() * 0.1; break;
        case kProbe: dh_same_srv = rng.next_double() * 0.2; break;
        default: dh_same_srv = 0.5 + rng.next_double() * 0.5; break;
    }
    f[33] = rate(dh_same_srv);
    f[34] = rate(cls == kProbe ? 0.5 + rng.next_double() * 0.5 : rng.next_double() * 0.1);
    double same_src_port = rng.next_double() * 0.2;
    if (cls == kProbe) same_src_port = 0.7 + rng.next_double() * 0.3;
    else if (cls == kDos) same_src_port = rng.next_double();
    f[35] = rate(same_src_port);
    f[36] = rate(cls == kProbe ? 0.2 + rng.next_double() * 0.4 : rng.next_double() * 0.1);
    f[37] = rate(serror + (rng.next_double() - 0.5) * 0.03);
    f[38] = rate(serror + (rng.next_double() - 0.5) * 0.03);
    f[39] = rate(rerror + (rng.next_double() - 0.5) * 0.03);
    f[40] = rate(rerror + (rng.next_double() - 0.5) * 0.03);
    return f;
}

// Official per-class proportions, scaled by largest remainder to n rows.
// Train: normal 67343, DoS 45927, Probe 11656, R2L 995, U2R 52 (of 125973).
// Test:  normal 9711,  DoS 7458,  Probe 2421,  R2L 2754, U2R 200 (of 22544).
std::array<std::size_t, 5> class_counts(std::size_t n, bool test) {
    const std::array<double, 5> official =
        test ? std::array<double, 5>{7458, 2421, 2754, 200, 9711}
             : std::array<double, 5>{45927, 11656, 995, 52, 67343};
    const double total = std::accumulate(official.begin(), official.end(), 0.0);

    std::array<std::size_t, 5> counts{};
    std::array<std::pair<double, int>, 5> remainders{};
    std::size_t assigned = 0;
    for (int c = 0; c < 5; ++c) {
        const double exact = static_cast<double>(n) * official[static_cast<std::size_t>(c)] / total;
        counts[static_cast<std::size_t>(c)] = static_cast<std::size_t>(exact);
        remainders[static_cast<std::size_t>(c)] = {exact - static_cast<double>(counts[static_cast<std::size_t>(c)]), c};
        assigned += counts[static_cast<std::size_t>(c)];
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
        counts[static_cast<std::size_t>(remainders[i % 5].second)] += 1;
    }
    return counts;
}

std::string build_file(std::size_t rows, bool test_mode, bool kdd99_style, std::uint64_t seed) {
    const auto counts = class_counts(rows, test_mode);

    // Interleave classes deterministically.
    std::vector<int> classes;
    classes.reserve(rows);
    for (int c = 0; c < 5; ++c) {
        classes.insert(classes.end(), counts[static_cast<std::size_t>(c)], c);
    }
    std::vector<std::size_t> order(classes.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_stream(seed, test_mode ? 2 : 1));
    shuffle_indices(order, shuffle_rng);

    Rng rng(derive_stream(seed, test_mode ? 20 : 10));
    std::vector<std::vector<std::string>> records;
    records.reserve(rows);
    std::vector<int> record_class;
    record_class.reserve(rows);
    for (std::size_t i : order) {
        const int cls = classes[i];
        std::vector<std::string> fields = make_features(cls, rng, test_mode);
        const char* label = pick_weighted(train_labels(cls), rng);
        if (test_mode && cls != kNormal && rng.next_below(100) < 20) {
            label = pick_weighted(novel_test_labels(cls), rng);
        }
        fields.push_back(label);
        record_class.push_back(cls);
        records.push_back(std::move(fields));
    }

    if (!test_mode) {
        // Guarantee full categorical coverage in the training file so a fitted
        // encoder always reaches the full vocabulary width.
        auto ensure = [&](std::size_t column, std::span<const char* const> vocab) {
            std::map<std::string, int> freq;
            for (const auto& rec : records) freq[rec[column]] += 1;
            std::size_t row = 0;
            for (const char* v : vocab) {
                if (freq[v] > 0) continue;
                // Claim successive rows and overwrite just this categorical
                // field. Skip the rare U2R rows, and skip rows holding the
                // last occurrence of their value so no category gets lost.
                while (row < records.size() &&
                       (record_class[row] == kU2r || freq[records[row][column]] <= 1)) {
                    ++row;
                }
                if (row >= records.size()) throw Error("synthetic file too small for coverage");
                freq[records[row][column]] -= 1;
                records[row][column] = v;
                freq[v] += 1;
                ++row;
            }
        };
        ensure(2, kdd_services());
        ensure(3, kdd_flags());
        ensure(1, kdd_protocols());
    }

    std::string out;
    out.reserve(rows * 160);
    Rng difficulty_rng(derive_stream(seed, test_mode ? 21 : 11));
    for (auto& rec : records) {
        if (kdd99_style) rec.back() += '.';
        for (std::size_t i = 0; i < rec.size(); ++i) {
            if (i) out += ',';
            out += rec[i];
        }
        if (!kdd99_style) out += ',' + std::to_string(uniform_int(difficulty_rng, 15, 21));
        out += '\n';
    }
    return out;
}

}  // namespace

std::span<const char* const> kdd_protocols() { return kProtocols; }
std::span<const char* const> kdd_services() { return kServices; }
std::span<const char* const> kdd_flags() { return kFlags; }

void write_synthetic_kdd(const std::filesystem::path& train_path,
                         const std::filesystem::path& test_path, const SynthSpec& spec) {
    if (spec.train_rows < 500 || spec.test_rows < 100) {
        throw ConfigError("synthetic files need at least 500 train / 100 test rows");
    }
    write_text_file_atomic(train_path, build_file(spec.train_rows, false, spec.kdd99_style, spec.seed));
    write_text_file_atomic(test_path, build_file(spec.test_rows, true, spec.kdd99_style, spec.seed));
}

NslKddFiles resolve_nslkdd_files(const std::filesystem::path& cache_dir, std::size_t train_rows,
                                 std::size_t test_rows) {
    const char* env_train = std::getenv("NIDS_NSLKDD_TRAIN");
    const char* env_test = std::getenv("NIDS_NSLKDD_TEST");
    if (env_train || env_test) {
        if (!env_train || !env_test) {
            throw ConfigError("set both NIDS_NSLKDD_TRAIN and NIDS_NSLKDD_TEST, or neither");
        }
        return {env_train, env_test, false};
    }

    std::filesystem::create_directories(cache_dir);
    NslKddFiles files;
    files.train = cache_dir / ("synth_nslkdd_train_" + std::to_string(train_rows) + ".csv");
    files.test = cache_dir / ("synth_nslkdd_test_" + std::to_string(test_rows) + ".csv");
    files.synthetic = true;
    if (!std::filesystem::exists(files.train) || !std::filesystem::exists(files.test)) {
        SynthSpec spec;
        spec.train_rows = train_rows;
        spec.test_rows = test_rows;
        write_synthetic_kdd(files.train, files.test, spec);
    }
    return files;
}

}  // namespace nids
