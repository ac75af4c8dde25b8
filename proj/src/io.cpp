#include "contractcheck/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "contractcheck/errors.hpp"

namespace contractcheck {

namespace {

struct Token {
    std::string text;
    std::size_t column = 0;
    bool quoted = false;
};

[[noreturn]] void fail(const char* code, const std::string& message, std::size_t line, std::size_t column) {
    throw ParseError(code, message, line, column);
}

std::vector<Token> tokenize(std::string_view line, std::size_t lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char ch = line[i];
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++i;
            continue;
        }
        if (ch == '#') break;
        Token tok;
        tok.column = i + 1;
        if (ch == '"') {
            tok.quoted = true;
            ++i;
            bool closed = false;
            while (i < line.size()) {
                char c = line[i++];
                if (c == '"') {
                    closed = true;
                    break;
                }
                if (c == '\\') {
                    if (i >= line.size()) break;
                    char e = line[i++];
                    switch (e) {
                        case 'n': tok.text += '\n'; break;
                        case 't': tok.text += '\t'; break;
                        case '\\': tok.text += '\\'; break;
                        case '"': tok.text += '"'; break;
                        default: fail("E_BAD_STRING", "unknown escape sequence", lineno, i - 1);
                    }
                    continue;
                }
                tok.text += c;
            }
            if (!closed) fail("E_BAD_STRING", "unterminated string", lineno, tok.column);
            if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#')
                fail("E_SYNTAX", "expected whitespace after string", lineno, i + 1);
        } else {
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#' &&
                   line[i] != '"')
                tok.text += line[i++];
            if (i < line.size() && line[i] == '"') fail("E_SYNTAX", "unexpected quote", lineno, i + 1);
        }
        out.push_back(std::move(tok));
    }
    return out;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    const auto first = static_cast<unsigned char>(s[0]);
    if (!(std::isalpha(first) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || c == '_' || c == '.' || c == '-';
    });
}

std::string require_identifier(const Token& tok, std::size_t line) {
    if (tok.quoted || !is_identifier(tok.text)) fail("E_BAD_ID", "invalid identifier '" + tok.text + "'", line, tok.column);
    return tok.text;
}

EventLabel require_label(const Token& tok, std::size_t line) {
    const auto colon = tok.text.find(':');
    if (tok.quoted || colon == std::string::npos)
        fail("E_BAD_LABEL", "expected <actor>:<action>, got '" + tok.text + "'", line, tok.column);
    EventLabel label{tok.text.substr(0, colon), tok.text.substr(colon + 1)};
    if (!is_identifier(label.actor) || !is_identifier(label.action))
        fail("E_BAD_LABEL", "expected <actor>:<action>, got '" + tok.text + "'", line, tok.column);
    return label;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        ++lineno;
        fn(text.substr(pos, end - pos), lineno);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
}

/// `key=value` options; bare flags have an empty value.
struct Option {
    std::string key;
    std::string value;
    bool has_value = false;
    std::size_t column = 0;
};

std::vector<Option> parse_options(const std::vector<Token>& tokens, std::size_t from, std::size_t line) {
    std::vector<Option> out;
    std::set<std::string> seen;
    for (std::size_t i = from; i < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        if (tok.quoted) fail("E_SYNTAX", "unexpected string", line, tok.column);
        Option opt;
        opt.column = tok.column;
        const auto eq = tok.text.find('=');
        if (eq == std::string::npos) {
            opt.key = tok.text;
        } else {
            opt.key = tok.text.substr(0, eq);
            opt.value = tok.text.substr(eq + 1);
            opt.has_value = true;
        }
        if (!seen.insert(opt.key).second) fail("E_DUP_KEY", "repeated option '" + opt.key + "'", line, tok.column);
        out.push_back(std::move(opt));
    }
    return out;
}

std::string parse_header(const std::vector<Token>& tokens, std::size_t line, const char* keyword) {
    if (tokens.size() != 2 || !tokens[1].quoted)
        fail("E_SYNTAX", std::string("expected ") + keyword + " \"<name>\"", line,
             tokens.size() > 1 ? tokens[1].column : tokens[0].column + tokens[0].text.size());
    return tokens[1].text;
}

}  // namespace

// --- .pnet ------------------------------------------------------------------------

NetDocument parse_net_document(std::string_view text) {
    struct PendingArc {
        std::string a;
        std::string op;
        std::string b;
        std::size_t line;
        std::size_t col_a;
        std::size_t col_b;
    };

    NetDocument doc;
    std::optional<std::string> name;
    std::vector<Place> places;
    std::vector<Transition> transitions;
    std::vector<PendingArc> pending;
    std::set<std::string> place_ids, transition_ids;

    auto declare = [&](const Token& tok, std::size_t line) {
        const std::string id = require_identifier(tok, line);
        if (place_ids.count(id) || transition_ids.count(id))
            fail("E_DUP_ID", "duplicate identifier '" + id + "'", line, tok.column);
        doc.spans[id] = {line, tok.column};
        return id;
    };

    for_each_line(text, [&](std::string_view raw, std::size_t line) {
        const auto tokens = tokenize(raw, line);
        if (tokens.empty()) return;
        const auto& kw = tokens[0];
        if (kw.quoted) fail("E_SYNTAX", "expected a keyword", line, kw.column);

        if (kw.text == "net") {
            if (name) fail("E_DUP_HEADER", "repeated net header", line, kw.column);
            name = parse_header(tokens, line, "net");
        } else if (kw.text == "place") {
            if (tokens.size() < 2) fail("E_SYNTAX", "expected place identifier", line, kw.column);
            Place p;
            p.id = declare(tokens[1], line);
            for (const auto& opt : parse_options(tokens, 2, line)) {
                if (opt.key == "tokens" && opt.has_value) {
                    Tokens n = -1;
                    const auto* first = opt.value.data();
                    const auto* last = first + opt.value.size();
                    auto [ptr, ec] = std::from_chars(first, last, n);
                    if (ec != std::errc() || ptr != last || n < 0 || opt.value.empty())
                        fail("E_BAD_VALUE", "tokens must be a non-negative integer", line, opt.column);
                    p.initial_tokens = n;
                } else if (opt.key == "legal" && opt.has_value) {
                    if (opt.value == "power") p.legal_kind = LegalKind::power;
                    else if (opt.value == "obligation") p.legal_kind = LegalKind::obligation;
                    else fail("E_BAD_VALUE", "legal must be power or obligation", line, opt.column);
                } else if (opt.key == "lcp" && !opt.has_value) {
                    p.is_lcp = true;
                } else {
                    fail("E_UNKNOWN_KEY", "unknown place option '" + opt.key + "'", line, opt.column);
                }
            }
            place_ids.insert(p.id);
            places.push_back(std::move(p));
        } else if (kw.text == "transition") {
            if (tokens.size() < 2) fail("E_SYNTAX", "expected transition identifier", line, kw.column);
            Transition t;
            t.id = declare(tokens[1], line);
            bool has_actor = false, has_action = false;
            for (const auto& opt : parse_options(tokens, 2, line)) {
                if ((opt.key == "actor" || opt.key == "action") && opt.has_value) {
                    if (!is_identifier(opt.value))
                        fail("E_BAD_ID", "invalid " + opt.key + " '" + opt.value + "'", line, opt.column);
                    if (opt.key == "actor") {
                        t.label.actor = opt.value;
                        has_actor = true;
                    } else {
                        t.label.action = opt.value;
                        has_action = true;
                    }
                } else if (opt.key == "temporal" && !opt.has_value) {
                    t.temporal = true;
                } else {
                    fail("E_UNKNOWN_KEY", "unknown transition option '" + opt.key + "'", line, opt.column);
                }
            }
            if (!has_actor || !has_action)
                fail("E_MISSING_KEY", "transition needs actor= and action=", line, kw.column);
            transition_ids.insert(t.id);
            transitions.push_back(std::move(t));
        } else if (kw.text == "arc") {
            if (tokens.size() != 4) fail("E_SYNTAX", "expected arc <a> (->|<->|-o) <b>", line, kw.column);
            const auto& op = tokens[2];
            if (op.quoted || (op.text != "->" && op.text != "<->" && op.text != "-o"))
                fail("E_SYNTAX", "unknown arc operator '" + op.text + "'", line, op.column);
            pending.push_back({require_identifier(tokens[1], line), op.text, require_identifier(tokens[3], line),
                               line, tokens[1].column, tokens[3].column});
        } else {
            fail("E_UNKNOWN_KEYWORD", "unknown keyword '" + kw.text + "'", line, kw.column);
        }
    });

    if (!name) fail("E_MISSING_HEADER", "missing net \"<name>\" header", 1, 1);

    std::vector<Arc> arcs;
    for (const auto& arc : pending) {
        const bool a_known = place_ids.count(arc.a) || transition_ids.count(arc.a);
        const bool b_known = place_ids.count(arc.b) || transition_ids.count(arc.b);
        if (!a_known) fail("E_UNKNOWN_ID", "undeclared node '" + arc.a + "'", arc.line, arc.col_a);
        if (!b_known) fail("E_UNKNOWN_ID", "undeclared node '" + arc.b + "'", arc.line, arc.col_b);
        if (arc.op == "->") {
            arcs.push_back({ArcKind::normal, arc.a, arc.b});
            continue;
        }
        const bool place_first = place_ids.count(arc.a) && transition_ids.count(arc.b);
        const bool transition_first = transition_ids.count(arc.a) && place_ids.count(arc.b);
        if (arc.op == "-o") {
            if (!place_first)
                fail("E_ARC_KIND", "inhibitor arcs run from a place to a transition", arc.line, arc.col_a);
            arcs.push_back({ArcKind::inhibitor, arc.a, arc.b});
        } else {
            if (place_first) arcs.push_back({ArcKind::bidirectional, arc.a, arc.b});
            else if (transition_first) arcs.push_back({ArcKind::bidirectional, arc.b, arc.a});
            else fail("E_ARC_KIND", "bidirectional arcs join a place and a transition", arc.line, arc.col_a);
        }
    }

    doc.net = PetriNet(*name, std::move(places), std::move(transitions), std::move(arcs));
    return doc;
}

PetriNet parse_net(std::string_view text) { return parse_net_document(text).net; }

std::string serialize_net(const PetriNet& net) {
    std::ostringstream out;
    out << "net " << quote(net.name()) << "\n";
    if (!net.places().empty()) out << "\n";
    for (const auto& p : net.places()) {
        out << "place " << p.id;
        if (p.initial_tokens != 0) out << " tokens=" << p.initial_tokens;
        if (p.legal_kind != LegalKind::none) out << " legal=" << to_string(p.legal_kind);
        if (p.is_lcp) out << " lcp";
        out << "\n";
    }
    if (!net.transitions().empty()) out << "\n";
    for (const auto& t : net.transitions()) {
        out << "transition " << t.id << " actor=" << t.label.actor << " action=" << t.label.action;
        if (t.temporal) out << " temporal";
        out << "\n";
    }
    if (!net.arcs().empty()) out << "\n";
    for (const auto& a : net.arcs()) {
        const char* op = a.kind == ArcKind::normal ? "->" : a.kind == ArcKind::bidirectional ? "<->" : "-o";
        out << "arc " << a.from << " " << op << " " << a.to << "\n";
    }
    return out.str();
}

// --- .align -----------------------------------------------------------------------

AlignDocument parse_alignment_document(std::string_view text) {
    AlignDocument doc;
    auto& align = doc.alignment;
    std::optional<std::string> name;

    for_each_line(text, [&](std::string_view raw, std::size_t line) {
        const auto tokens = tokenize(raw, line);
        if (tokens.empty()) return;
        const auto& kw = tokens[0];
        if (kw.quoted) fail("E_SYNTAX", "expected a keyword", line, kw.column);

        auto expect_arrow = [&](const char* form) {
            if (tokens.size() != 4 || tokens[2].quoted || tokens[2].text != "=>")
                fail("E_SYNTAX", std::string("expected ") + form, line,
                     tokens.size() > 2 ? tokens[2].column : kw.column);
        };

        if (kw.text == "align") {
            if (name) fail("E_DUP_HEADER", "repeated align header", line, kw.column);
            name = parse_header(tokens, line, "align");
        } else if (kw.text == "event") {
            expect_arrow("event <actor>:<action> => <actor>:<action>");
            const auto from = require_label(tokens[1], line);
            const auto to = require_label(tokens[3], line);
            if (!align.event_map.emplace(from, to).second)
                fail("E_DUP_KEY", "event '" + from.str() + "' mapped twice", line, tokens[1].column);
            doc.spans["event:" + from.str()] = {line, tokens[1].column};
        } else if (kw.text == "irrelevant") {
            if (tokens.size() != 2) fail("E_SYNTAX", "expected irrelevant <actor>:<action>", line, kw.column);
            const auto label = require_label(tokens[1], line);
            if (!align.irrelevant.insert(label).second)
                fail("E_DUP_KEY", "event '" + label.str() + "' listed twice", line, tokens[1].column);
            doc.spans["irrelevant:" + label.str()] = {line, tokens[1].column};
        } else if (kw.text == "legal") {
            expect_arrow("legal <candidate-place> => <ground-place>");
            const auto from = require_identifier(tokens[1], line);
            const auto to = require_identifier(tokens[3], line);
            if (!align.legal_map.emplace(from, to).second)
                fail("E_DUP_KEY", "place '" + from + "' mapped twice", line, tokens[1].column);
            doc.spans["legal:" + from] = {line, tokens[1].column};
        } else if (kw.text == "illegal-seq") {
            if (tokens.size() < 2) fail("E_SYNTAX", "expected illegal-seq <actor>:<action> ...", line, kw.column);
            std::vector<EventLabel> seq;
            for (std::size_t i = 1; i < tokens.size(); ++i) seq.push_back(require_label(tokens[i], line));
            doc.spans["illegal-seq:" + std::to_string(align.illegal_sequences.size())] = {line, kw.column};
            align.illegal_sequences.push_back(std::move(seq));
        } else {
            fail("E_UNKNOWN_KEYWORD", "unknown keyword '" + kw.text + "'", line, kw.column);
        }
    });

    if (!name) fail("E_MISSING_HEADER", "missing align \"<name>\" header", 1, 1);
    align.name = *name;
    return doc;
}

EventAlignment parse_alignment(std::string_view text) { return parse_alignment_document(text).alignment; }

std::string serialize_alignment(const EventAlignment& align) {
    std::ostringstream out;
    out << "align " << quote(align.name) << "\n";
    if (!align.event_map.empty()) out << "\n";
    for (const auto& [from, to] : align.event_map) out << "event " << from.str() << " => " << to.str() << "\n";
    if (!align.irrelevant.empty()) out << "\n";
    for (const auto& label : align.irrelevant) out << "irrelevant " << label.str() << "\n";
    if (!align.legal_map.empty()) out << "\n";
    for (const auto& [from, to] : align.legal_map) out << "legal " << from << " => " << to << "\n";
    if (!align.illegal_sequences.empty()) out << "\n";
    for (const auto& seq : align.illegal_sequences) {
        out << "illegal-seq";
        for (const auto& label : seq) out << " " << label.str();
        out << "\n";
    }
    return out.str();
}

// --- files ------------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

PetriNet load_net(const std::filesystem::path& path) { return parse_net(read_text_file(path)); }

EventAlignment load_alignment(const std::filesystem::path& path) {
    return parse_alignment(read_text_file(path));
}

// --- reports ----------------------------------------------------------------------

namespace {

nlohmann::ordered_json ratio_json(const Ratio& r) {
    return {{"numerator", r.numerator}, {"denominator", r.denominator}, {"value", r.value()}};
}

nlohmann::ordered_json witness_json(const std::optional<BehaviorWitness>& w) {
    if (!w) return nullptr;
    nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
    if (w->result.witness)
        for (const auto& b : *w->result.witness)
            blocks.push_back({{"ground_event", b.ground_event}, {"first", b.first}, {"last", b.last}});
    return {{"behavior", w->other}, {"blocks", blocks}};
}

nlohmann::ordered_json reason_json(const std::optional<MatchFailure>& r) {
    if (!r) return nullptr;
    return to_string(*r);
}

nlohmann::ordered_json diagnostics_json(const std::vector<Diagnostic>& diags) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& d : diags) {
        nlohmann::ordered_json j = {{"code", d.code}, {"severity", to_string(d.severity)}, {"message", d.message},
                            {"subject", d.subject}};
        if (d.span) j["span"] = {{"line", d.span->line}, {"column", d.span->column}};
        out.push_back(std::move(j));
    }
    return out;
}

std::string render_table(const ComplianceReport& report, int digits) {
    const auto& m = report.metrics;
    const auto& c = m.counts;
    const std::vector<std::string> header = {"Contract", "Candidate", "FES", "Fitness", "Precision"};
    const std::vector<std::string> row = {report.metadata.ground_net, report.metadata.candidate_net,
                                          m.fes.rounded(digits), m.fitness.rounded(digits),
                                          m.precision.rounded(digits)};
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::size_t width = std::max(header[i].size(), row[i].size());
            std::string cell = cells[i];
            if (i + 1 < cells.size()) cell += std::string(width - cell.size() + 2, ' ');
            line += cell;
        }
        out << line << "\n";
    };
    emit(header);
    emit(row);
    out << "\n";
    out << "behaviors: ground " << c.ground_total << ", candidate " << c.candidate_total << ", pruned "
        << c.pruned << "\n";
    out << "matched: strict " << c.ground_strictly_matched << "/" << c.ground_total << ", covering "
        << c.ground_covered << "/" << c.ground_total << ", embedded " << c.candidate_embedded << "/"
        << c.candidate_total << "\n";
    out << "comparisons: " << c.comparisons << " performed, " << c.comparisons_skipped << " skipped by pruning\n";
    return out.str();
}

}  // namespace

nlohmann::ordered_json report_to_json(const ComplianceReport& report) {
    const auto& md = report.metadata;
    const auto& m = report.metrics;
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["metadata"] = {
        {"tool", {{"name", kToolName}, {"version", md.tool_version}}},
        {"ground_net", md.ground_net},
        {"candidate_net", md.candidate_net},
        {"alignment", md.alignment},
        {"limits",
         {{"max_states", md.limits.max_states}, {"max_paths", md.limits.max_paths}, {"max_depth", md.limits.max_depth}}},
        {"options",
         {{"lcp_auto", md.options.lcp_auto},
          {"allow_no_terminal", md.options.allow_no_terminal},
          {"prune", md.options.prune},
          {"exclude_pruned", md.options.exclude_pruned}}},
        {"generated_at", md.generated_at},
    };
    j["metrics"] = {{"fitness", ratio_json(m.fitness)}, {"precision", ratio_json(m.precision)},
                    {"fes", ratio_json(m.fes)}};
    j["counts"] = {{"ground_total", m.counts.ground_total},
                   {"candidate_total", m.counts.candidate_total},
                   {"ground_strictly_matched", m.counts.ground_strictly_matched},
                   {"ground_covered", m.counts.ground_covered},
                   {"candidate_embedded", m.counts.candidate_embedded},
                   {"pruned", m.counts.pruned},
                   {"comparisons", m.counts.comparisons},
                   {"comparisons_skipped", m.counts.comparisons_skipped}};

    nlohmann::ordered_json ground = nlohmann::ordered_json::array();
    for (const auto& g : report.ground) {
        ground.push_back({{"index", g.index},
                          {"transitions", g.transitions},
                          {"events", g.events},
                          {"strict", witness_json(g.strict)},
                          {"covering", witness_json(g.covering)},
                          {"best_candidate", g.best_candidate ? nlohmann::ordered_json(*g.best_candidate) : nlohmann::ordered_json()},
                          {"reason", reason_json(g.reason)}});
    }
    j["ground_behaviors"] = std::move(ground);

    nlohmann::ordered_json candidates = nlohmann::ordered_json::array();
    for (const auto& c : report.candidates) {
        candidates.push_back({{"index", c.index},
                              {"transitions", c.transitions},
                              {"events", c.events},
                              {"status", to_string(c.status)},
                              {"embedding", witness_json(c.embedding)},
                              {"reason", reason_json(c.reason)}});
    }
    j["candidate_behaviors"] = std::move(candidates);
    j["diagnostics"] = diagnostics_json(report.diagnostics);
    return j;
}

std::string serialize_report(const ComplianceReport& report, ReportFormat format, int digits) {
    if (format == ReportFormat::table) return render_table(report, digits);
    return report_to_json(report).dump(2) + "\n";
}

}  // namespace contractcheck
