#include "clawmark/certificate.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace clawmark {

using ordered_json = nlohmann::ordered_json;

Certificate make_certificate(const Table& t0, const Table& t1, std::vector<CertStep> steps) {
    if (!(t0.spec == t1.spec) || t0.n != t1.n)
        fail(ErrorKind::Structural, "certificate tables must share group and n");
    Certificate c;
    c.spec = t0.spec;
    c.n = t0.n;
    c.t0 = canonicalize(t0).rows;
    c.t1 = canonicalize(t1).rows;
    c.steps = std::move(steps);
    c.k = 2;
    for (const CertStep& s : c.steps) c.k = std::max(c.k, s.move.degree());
    return c;
}

namespace {

bool row_shape_ok(const GroupSpec& spec, int n, const Flow& row) {
    if (static_cast<int>(row.size()) != n) return false;
    for (ElemIdx e : row)
        if (e >= spec.order()) return false;
    return true;
}

// Per-column element counts, derived from scratch (rows need not be flows).
std::vector<std::vector<int>> raw_counts(const GroupSpec& spec, int n,
                                         const std::vector<Flow>& rows) {
    std::vector<std::vector<int>> counts(n, std::vector<int>(spec.order(), 0));
    for (const Flow& row : rows)
        for (int i = 0; i < n; ++i)
            ++counts[i][row[i]];
    return counts;
}

bool subtract_multiset(std::vector<Flow>& state, const std::vector<Flow>& removed) {
    for (const Flow& gone : removed) {
        auto it = std::find(state.begin(), state.end(), gone);
        if (it == state.end()) return false;
        state.erase(it);
    }
    return true;
}

VerifyResult rejection(const std::string& reason, int step, const std::string& message) {
    return VerifyResult{false, reason, step, message};
}

}  // namespace

VerifyResult verify_certificate(const Certificate& c) {
    const GroupSpec& spec = c.spec;
    const int n = c.n;
    // The initial tables must consist of flows.
    for (const auto* table : {&c.t0, &c.t1}) {
        const char* name = table == &c.t0 ? "t0" : "t1";
        for (std::size_t r = 0; r < table->size(); ++r) {
            const Flow& row = (*table)[r];
            if (!row_shape_ok(spec, n, row) || !is_flow(spec, row))
                return rejection(kReasonNotAFlow, -1,
                                 std::string(name) + " row " + std::to_string(r + 1) +
                                     " is not a flow");
        }
    }

    std::vector<Flow> state[2] = {c.t0, c.t1};
    std::sort(state[0].begin(), state[0].end());
    std::sort(state[1].begin(), state[1].end());

    for (std::size_t s = 0; s < c.steps.size(); ++s) {
        const int at = static_cast<int>(s);
        const CertStep& step = c.steps[s];
        if (step.side != 0 && step.side != 1)
            return rejection(kReasonInapplicable, at, "unknown side");
        for (std::size_t r = 0; r < step.move.added.size(); ++r)
            if (!row_shape_ok(spec, n, step.move.added[r]) ||
                !is_flow(spec, step.move.added[r]))
                return rejection(kReasonNotAFlow, at,
                                 "added row " + std::to_string(r + 1) + " is not a flow");
        for (std::size_t r = 0; r < step.move.removed.size(); ++r)
            if (!row_shape_ok(spec, n, step.move.removed[r]))
                return rejection(kReasonNotAFlow, at,
                                 "removed row " + std::to_string(r + 1) + " is malformed");
        if (step.move.removed.size() != step.move.added.size())
            return rejection(kReasonSignatureMismatch, at,
                             "removed and added row counts differ");
        if (step.move.degree() > c.k)
            return rejection(kReasonDegreeExceeded, at,
                             "move degree " + std::to_string(step.move.degree()) +
                                 " exceeds the declared bound " + std::to_string(c.k));
        if (raw_counts(spec, n, step.move.removed) != raw_counts(spec, n, step.move.added))
            return rejection(kReasonSignatureMismatch, at,
                             "removed and added rows have different column counts");
        if (!subtract_multiset(state[step.side], step.move.removed))
            return rejection(kReasonInapplicable, at,
                             "removed rows are not a sub-multiset of the current table");
        state[step.side].insert(state[step.side].end(), step.move.added.begin(),
                                step.move.added.end());
        std::sort(state[step.side].begin(), state[step.side].end());
    }

    if (state[0] != state[1])
        return rejection(kReasonFinalMismatch, static_cast<int>(c.steps.size()),
                         "the two sides do not agree after replay");
    return VerifyResult{true, "", -1, "replay reached a common table"};
}

namespace {

ordered_json rows_to_json(const GroupSpec& spec, const std::vector<Flow>& rows, bool sorted) {
    std::vector<Flow> ordered = rows;
    if (sorted) std::sort(ordered.begin(), ordered.end());
    ordered_json out = ordered_json::array();
    for (const Flow& row : ordered) {
        ordered_json jrow = ordered_json::array();
        for (ElemIdx e : row) jrow.push_back(spec.format_element(e));
        out.push_back(std::move(jrow));
    }
    return out;
}

ElemIdx entry_from_json(const GroupSpec& spec, const ordered_json& v, const std::string& path) {
    if (v.is_string()) {
        try {
            return spec.parse_element(v.get<std::string>());
        } catch (const Error& e) {
            fail(ErrorKind::Parse, path + ": " + e.what());
        }
    }
    if (v.is_number_integer()) {
        long long value = v.get<long long>();
        if (spec.rank() != 1)
            fail(ErrorKind::Parse,
                 path + ": numeric entries are only allowed for single-factor groups");
        if (value < 0 || value >= spec.order())
            fail(ErrorKind::Parse, path + ": entry " + std::to_string(value) +
                                       " out of range for " + spec.literal());
        return static_cast<ElemIdx>(value);
    }
    fail(ErrorKind::Parse, path + ": entry must be an element literal");
}

std::vector<Flow> rows_from_json(const GroupSpec& spec, int n, const ordered_json& v,
                                 const std::string& path) {
    if (!v.is_array()) fail(ErrorKind::Parse, path + ": expected an array of rows");
    std::vector<Flow> rows;
    for (std::size_t r = 0; r < v.size(); ++r) {
        const ordered_json& jrow = v[r];
        std::string row_path = path + "/" + std::to_string(r);
        if (!jrow.is_array()) fail(ErrorKind::Parse, row_path + ": expected an array");
        if (static_cast<int>(jrow.size()) != n)
            fail(ErrorKind::Parse, row_path + ": row has " + std::to_string(jrow.size()) +
                                       " entries, expected " + std::to_string(n));
        Flow row;
        row.reserve(n);
        for (std::size_t e = 0; e < jrow.size(); ++e)
            row.push_back(entry_from_json(spec, jrow[e], row_path + "/" + std::to_string(e)));
        rows.push_back(std::move(row));
    }
    return rows;
}

const ordered_json& require(const ordered_json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(ErrorKind::Parse, "missing field " + path);
    return *it;
}

}  // namespace

std::string serialize_certificate(const Certificate& c, int indent) {
    ordered_json out;
    out["group"] = c.spec.literal();
    out["n"] = c.n;
    out["k"] = c.k;
    out["t0"] = rows_to_json(c.spec, c.t0, true);
    out["t1"] = rows_to_json(c.spec, c.t1, true);
    ordered_json steps = ordered_json::array();
    for (const CertStep& s : c.steps) {
        ordered_json step;
        step["side"] = s.side;
        step["removed"] = rows_to_json(c.spec, s.move.removed, true);
        step["added"] = rows_to_json(c.spec, s.move.added, true);
        steps.push_back(std::move(step));
    }
    out["steps"] = std::move(steps);
    return out.dump(indent) + "\n";
}

Certificate parse_certificate(const std::string& json_text, std::vector<std::string>* warnings) {
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        fail(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail(ErrorKind::Parse, "certificate must be a JSON object");

    static const char* known[] = {"group", "n", "k", "t0", "t1", "steps"};
    for (auto it = root.begin(); it != root.end(); ++it) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                return it.key() == k;
            }) == std::end(known) &&
            warnings)
            warnings->push_back("ignoring unknown field /" + it.key());
    }

    const ordered_json& jgroup = require(root, "group", "/group");
    if (!jgroup.is_string()) fail(ErrorKind::Parse, "/group: expected a group literal string");
    GroupSpec spec = GroupSpec::parse(jgroup.get<std::string>());

    const ordered_json& jn = require(root, "n", "/n");
    if (!jn.is_number_integer() || jn.get<long long>() < 1)
        fail(ErrorKind::Parse, "/n: expected a positive integer");
    int n = jn.get<int>();

    const ordered_json& jk = require(root, "k", "/k");
    if (!jk.is_number_integer() || jk.get<long long>() < 0)
        fail(ErrorKind::Parse, "/k: expected a nonnegative integer");

    Certificate c;
    c.spec = std::move(spec);
    c.n = n;
    c.k = jk.get<int>();
    c.t0 = rows_from_json(c.spec, n, require(root, "t0", "/t0"), "/t0");
    c.t1 = rows_from_json(c.spec, n, require(root, "t1", "/t1"), "/t1");

    const ordered_json& jsteps = require(root, "steps", "/steps");
    if (!jsteps.is_array()) fail(ErrorKind::Parse, "/steps: expected an array");
    for (std::size_t s = 0; s < jsteps.size(); ++s) {
        const ordered_json& jstep = jsteps[s];
        std::string path = "/steps/" + std::to_string(s);
        if (!jstep.is_object()) fail(ErrorKind::Parse, path + ": expected an object");
        for (auto it = jstep.begin(); it != jstep.end(); ++it) {
            if (it.key() != "side" && it.key() != "removed" && it.key() != "added" && warnings)
                warnings->push_back("ignoring unknown field " + path + "/" + it.key());
        }
        const ordered_json& jside = require(jstep, "side", path + "/side");
        if (!jside.is_number_integer() ||
            (jside.get<long long>() != 0 && jside.get<long long>() != 1))
            fail(ErrorKind::Parse, path + "/side: expected 0 or 1");
        CertStep step;
        step.side = jside.get<int>();
        step.move.removed =
            rows_from_json(c.spec, n, require(jstep, "removed", path + "/removed"),
                           path + "/removed");
        step.move.added = rows_from_json(c.spec, n, require(jstep, "added", path + "/added"),
                                         path + "/added");
        c.steps.push_back(std::move(step));
    }
    return c;
}

}  // namespace clawmark
