#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phishmatch/sbow.hpp"

namespace phishmatch::synthetic {

/// Deterministic labeled hostnames: benign ones drawn from `benign_domains`
/// with common subdomains, phishing ones built from target brands, phishy
/// vocabulary, cheap TLDs and hyphen/digit noise. Roughly half of each class,
/// with hard cases on both sides (benign login/secure subdomains, phishing
/// hosts without any phishy word).
std::vector<LabeledHost> labeled_hosts(size_t n, uint64_t seed, const std::vector<std::string>& benign_domains);

/// Phishy vocabulary used by the generator.
const std::vector<std::string>& phishy_words();

/// Brands the phishing generator targets.
const std::vector<std::string>& target_brands();

}  // namespace phishmatch::synthetic
