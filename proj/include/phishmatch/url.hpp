#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

namespace phishmatch {

/// Public suffix list with exact, wildcard and exception rules.
/// Internationalized rules are stored in their punycode form.
class PublicSuffixList {
public:
    static PublicSuffixList parse(std::string_view text);
    static PublicSuffixList load(const std::filesystem::path& path);

    /// The snapshot shipped in the data directory, loaded once.
    static const PublicSuffixList& bundled();

    /// Number of trailing labels of `host` that form its public suffix.
    /// Unlisted hosts fall back to the implicit "*" rule (one label).
    size_t suffix_labels(std::string_view host) const;

    size_t rule_count() const { return exact_.size() + wildcard_.size() + exception_.size(); }

private:
    std::unordered_set<std::string> exact_;
    std::unordered_set<std::string> wildcard_;   // "*.ck" stored as "ck"
    std::unordered_set<std::string> exception_;  // "!www.ck" stored as "www.ck"
};

struct ParsedUrl {
    std::string scheme;
    std::string hostname;            ///< lowercased, punycode-encoded
    std::string subdomain;           ///< labels left of the registrable domain
    std::string brand;               ///< first label of the registrable domain
    std::string tld;                 ///< public suffix, may span several labels
    std::string registrable_domain;  ///< brand + "." + tld
    std::string directory;           ///< path up to and including the last '/'
    std::string filename;            ///< path after the last '/'
    std::string arguments;           ///< query string without '?'
    std::optional<uint16_t> port;
    bool ip_host = false;  ///< host is an IP literal; brand/tld/subdomain are empty
};

/// Splits a URL into its components. A missing scheme defaults to http.
/// For IP hosts the registrable domain is the address itself.
/// Throws MalformedUrl when there is no usable host.
ParsedUrl parse_url(std::string_view raw, const PublicSuffixList& psl = PublicSuffixList::bundled());

/// Lowercase, NFC and punycode-encode a host. Throws MalformedUrl on bad labels.
std::string to_ascii_host(std::string_view host);

/// IPv4 dotted form with decimal or 0x-hex parts, a single 32-bit hex
/// number, or an IPv6 literal (brackets optional).
bool is_ip_hostname(std::string_view host);

/// Dotted-decimal rendering of an IPv4 host in any accepted form.
std::optional<std::string> normalize_ipv4(std::string_view host);

}  // namespace phishmatch
