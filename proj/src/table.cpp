#include "clawmark/table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace clawmark {

Table::Table(GroupSpec spec_, int n_, std::vector<Flow> rows_)
    : spec(std::move(spec_)), n(n_), rows(std::move(rows_)) {
    if (n < 1) fail(ErrorKind::Structural, "table needs n >= 1");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(rows[r].size()) != n)
            fail(ErrorKind::Structural,
                 "row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                     " entries, expected " + std::to_string(n));
        if (!is_flow(spec, rows[r]))
            fail(ErrorKind::Validation,
                 "row " + std::to_string(r + 1) + " is not a flow: entries sum to " +
                     spec.format_element(flow_sum(spec, rows[r])) + " in " + spec.literal());
    }
}

bool Table::operator==(const Table& other) const {
    if (!(spec == other.spec) || n != other.n || rows.size() != other.rows.size())
        return false;
    std::vector<Flow> a = rows, b = other.rows;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

Table canonicalize(const Table& t) {
    Table out = t;
    std::sort(out.rows.begin(), out.rows.end());
    return out;
}

std::string table_bytes(const Table& t) {
    std::vector<Flow> sorted = t.rows;
    std::sort(sorted.begin(), sorted.end());
    std::string bytes;
    bytes.reserve(sorted.size() * t.n * 2);
    for (const Flow& row : sorted)
        for (ElemIdx e : row) {
            bytes.push_back(static_cast<char>(e & 0xff));
            bytes.push_back(static_cast<char>((e >> 8) & 0xff));
        }
    return bytes;
}

ColumnSignature column_signature(const Table& t) {
    ColumnSignature sig;
    sig.counts.assign(t.n, std::vector<int>(t.spec.order(), 0));
    for (const Flow& row : t.rows)
        for (int i = 0; i < t.n; ++i)
            ++sig.counts[i][row[i]];
    return sig;
}

std::string signature_bytes(const ColumnSignature& sig) {
    std::string bytes;
    for (const auto& col : sig.counts)
        for (int c : col) {
            bytes.push_back(static_cast<char>(c & 0xff));
            bytes.push_back(static_cast<char>((c >> 8) & 0xff));
            bytes.push_back(static_cast<char>((c >> 16) & 0xff));
            bytes.push_back(static_cast<char>((c >> 24) & 0xff));
        }
    return bytes;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

bool compatible(const Table& a, const Table& b) {
    if (!(a.spec == b.spec))
        fail(ErrorKind::Structural,
             "cannot compare tables over " + a.spec.literal() + " and " + b.spec.literal());
    if (a.n != b.n)
        fail(ErrorKind::Structural,
             "cannot compare tables with n=" + std::to_string(a.n) + " and n=" +
                 std::to_string(b.n));
    return column_signature(a) == column_signature(b);
}

namespace {

struct Line {
    std::string text;
    int number;  // 1-based position in the original input
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<Line> significant_lines(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        std::string line = trim(std::string(text.substr(pos, end - pos)));
        if (!line.empty() && line[0] != '#')
            lines.push_back({line, number});
        if (end == text.size()) break;
        pos = end + 1;
    }
    return lines;
}

std::string expect_header(const Line& line, const std::string& key) {
    if (line.text.rfind(key + ":", 0) != 0)
        fail(ErrorKind::Parse,
             "line " + std::to_string(line.number) + ": expected '" + key + ":', got '" +
                 line.text + "'");
    return trim(line.text.substr(key.size() + 1));
}

Table parse_block(const std::vector<Line>& lines) {
    if (lines.empty()) fail(ErrorKind::Parse, "empty table block");
    std::size_t at = 0;
    GroupSpec spec = GroupSpec::parse(expect_header(lines[at], "group"));
    ++at;
    if (at >= lines.size()) fail(ErrorKind::Parse, "missing 'n:' header");
    std::string n_text = expect_header(lines[at], "n");
    int n = 0;
    auto [p, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
    if (ec != std::errc{} || p != n_text.data() + n_text.size() || n < 1)
        fail(ErrorKind::Parse,
             "line " + std::to_string(lines[at].number) + ": bad n value '" + n_text + "'");
    ++at;
    if (at >= lines.size() || lines[at].text != "rows:")
        fail(ErrorKind::Parse,
             "line " + std::to_string(at < lines.size() ? lines[at].number : lines.back().number) +
                 ": expected 'rows:'");
    ++at;
    std::vector<Flow> rows;
    for (; at < lines.size(); ++at) {
        std::istringstream in(lines[at].text);
        Flow row;
        std::string token;
        int column = 0;
        while (in >> token) {
            ++column;
            try {
                row.push_back(spec.parse_element(token));
            } catch (const Error& e) {
                fail(ErrorKind::Parse,
                     "line " + std::to_string(lines[at].number) + ", entry " +
                         std::to_string(column) + ": " + e.what());
            }
        }
        if (static_cast<int>(row.size()) != n)
            fail(ErrorKind::Parse,
                 "line " + std::to_string(lines[at].number) + ": row has " +
                     std::to_string(row.size()) + " entries, expected " + std::to_string(n));
        if (!is_flow(spec, row))
            fail(ErrorKind::Validation,
                 "line " + std::to_string(lines[at].number) + ": row " +
                     std::to_string(rows.size() + 1) + " is not a flow (entries sum to " +
                     spec.format_element(flow_sum(spec, row)) + ")");
        rows.push_back(std::move(row));
    }
    return Table(std::move(spec), n, std::move(rows));
}

}  // namespace

Table parse_table(std::string_view text) {
    return parse_block(significant_lines(text));
}

std::string serialize_table(const Table& t) {
    std::ostringstream out;
    out << "group: " << t.spec.literal() << '\n';
    out << "n: " << t.n << '\n';
    out << "rows:\n";
    for (const Flow& row : t.rows)
        out << format_flow(t.spec, row) << '\n';
    return out.str();
}

std::pair<Table, Table> parse_pair_file(std::string_view text) {
    std::vector<Line> lines = significant_lines(text);
    auto split = std::find_if(lines.begin(), lines.end(),
                              [](const Line& l) { return l.text == "---"; });
    if (split == lines.end())
        fail(ErrorKind::Parse, "pair file needs a '---' separator between the two tables");
    std::vector<Line> first(lines.begin(), split);
    std::vector<Line> second(split + 1, lines.end());
    return {parse_block(first), parse_block(second)};
}

std::string serialize_pair(const Table& a, const Table& b) {
    return serialize_table(a) + "---\n" + serialize_table(b);
}

}  // namespace clawmark
