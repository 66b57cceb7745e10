#ifndef CLAWMARK_CERTIFICATE_HPP
#define CLAWMARK_CERTIFICATE_HPP

#include <string>
#include <vector>

#include "clawmark/move.hpp"
#include "clawmark/table.hpp"

namespace clawmark {

struct CertStep {
    int side = 0;  // 0: move applies to t0's side, 1: to t1's side
    Move move;
};

/**
 * A replayable witness that two compatible tables are connected by moves of
 * degree at most k. Initial tables are stored as raw rows: the verifier, not
 * the container, decides whether they are flows.
 */
struct Certificate {
    GroupSpec spec{std::vector<int>{2}};  // placeholder; set by builders/parsers
    int n = 1;
    int k = 2;
    std::vector<Flow> t0, t1;
    std::vector<CertStep> steps;
};

/// Builds a certificate from validated tables; k = max(2, largest step degree).
Certificate make_certificate(const Table& t0, const Table& t1, std::vector<CertStep> steps);

inline constexpr const char* kReasonNotAFlow = "NOT_A_FLOW";
inline constexpr const char* kReasonSignatureMismatch = "SIGNATURE_MISMATCH";
inline constexpr const char* kReasonDegreeExceeded = "DEGREE_EXCEEDED";
inline constexpr const char* kReasonInapplicable = "INAPPLICABLE";
inline constexpr const char* kReasonFinalMismatch = "FINAL_MISMATCH";

struct VerifyResult {
    bool accepted = false;
    std::string reason;  // one of the codes above when rejected
    /// Failing step, 0-based; -1 for the initial tables, steps.size() for the
    /// final comparison.
    int step = -1;
    std::string message;
};

/**
 * Replays the certificate from scratch, re-deriving column counts per step:
 * every added row must be a flow, removed and added must have equal column
 * counts, degrees must respect k, every move must be applicable when
 * reached, and the final tables must agree up to row permutation.
 */
VerifyResult verify_certificate(const Certificate& c);

/// JSON object with keys group, n, k, t0, t1, steps (rows sorted, element
/// literals as strings).
std::string serialize_certificate(const Certificate& c, int indent = 2);

/// Parse error (with the JSON path) on schema violations; unknown fields are
/// collected as warnings when a sink is given.
Certificate parse_certificate(const std::string& json_text,
                              std::vector<std::string>* warnings = nullptr);

}  // namespace clawmark

#endif
