#include "coulombflow/verify.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace coulombflow {

std::string content_hash(const std::string& content) {
    const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1)
        throw std::runtime_error("sha1 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

namespace {

// JSON has no infinity or NaN; encode them as strings so nothing is lost.
nlohmann::json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

nlohmann::json report_json(const Report& r, const nlohmann::json& config_echo, const std::string& input_text,
                           bool with_timestamp) {
    nlohmann::json checks = nlohmann::json::array();
    std::size_t passed = 0, failed = 0, inconclusive = 0;
    for (const CheckResult& c : r.checks) {
        checks.push_back({{"check_id", c.check_id},
                          {"anchor", c.anchor},
                          {"status", to_string(c.status)},
                          {"measured", number(c.measured)},
                          {"bound", number(c.bound)},
                          {"tolerance", number(c.tolerance)},
                          {"context", c.context},
                          {"note", c.note}});
        if (c.status == Status::pass) ++passed;
        else if (c.status == Status::fail) ++failed;
        else ++inconclusive;
    }
    nlohmann::json out = {
        {"checks", checks},
        {"summary", {{"total", r.checks.size()}, {"pass", passed}, {"fail", failed}, {"inconclusive", inconclusive}}},
        {"warnings", r.warnings},
        {"config", config_echo},
        {"input_hash", content_hash(input_text)},
        {"exit_code", r.exit_code()},
    };
    if (with_timestamp) out["timestamp"] = utc_now();
    return out;
}

int emit_report(const Report& r, const nlohmann::json& config_echo, const std::string& input_text,
                const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write report: " + path);
    f << report_json(r, config_echo, input_text).dump(2) << '\n';
    return r.exit_code();
}

} // namespace coulombflow
