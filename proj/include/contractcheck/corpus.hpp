#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "contractcheck/alignment.hpp"
#include "contractcheck/metrics.hpp"
#include "contractcheck/petri_net.hpp"

namespace contractcheck {

/// Expected properties recorded in the manifest. Absent fields are unknown.
struct FixtureExpectations {
    std::optional<std::size_t> behaviors;
    std::optional<std::size_t> places;
    std::optional<std::size_t> transitions;
    std::optional<std::size_t> powers;
    std::optional<std::size_t> obligations;
    std::optional<Ratio> fitness;
    std::optional<Ratio> precision;
    std::optional<Ratio> fes;
    /// Behavior enumeration fails without loop-control insertion.
    bool explodes_without_lcp = false;
    /// Candidate behaviors removed by the alignment's illegal sequences.
    std::optional<std::size_t> pruned;
};

struct Fixture {
    std::string name;
    std::string provenance;  // published | derived | trivial | synthetic
    std::string description;
    std::filesystem::path net_path;
    PetriNet net;
    /// For candidates: the fixture they are compared against and how.
    std::optional<std::string> ground;
    std::optional<std::filesystem::path> alignment_path;
    std::optional<EventAlignment> alignment;
    bool lcp_auto = false;
    FixtureExpectations expect;
};

/// Directory baked in at build time; overridable with CONTRACTCHECK_CORPUS_DIR.
std::filesystem::path default_corpus_dir();

/// Names of fixtures that ship data, in manifest order. Reserved slots are left out.
std::vector<std::string> list_fixtures(const std::filesystem::path& dir = default_corpus_dir());

/// Names of reserved slots (listed in the manifest, no files shipped).
std::vector<std::string> reserved_fixtures(const std::filesystem::path& dir = default_corpus_dir());

/// Parses and validates the fixture's files. Throws UnknownFixture for names
/// missing from the manifest or reserved, ParseError for malformed files and
/// ValidationFailed if the net has errors.
Fixture load_fixture(const std::string& name, const std::filesystem::path& dir = default_corpus_dir());

}  // namespace contractcheck
