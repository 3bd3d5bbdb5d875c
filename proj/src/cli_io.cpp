#include "llcent/cli_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

namespace llcent {

using nlohmann::json;

namespace {

int iw(std::size_t v) { return static_cast<int>(v); }

[[noreturn]] void parse_fail(const std::string& path, const std::string& message) {
    fail(ErrorCode::ParseError, (path.empty() ? "/" : path) + ": " + message);
}

[[noreturn]] void invalid(const std::string& path, const std::string& message) {
    fail(ErrorCode::ValidationError, (path.empty() ? "/" : path) + ": " + message);
}

void require_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        parse_fail(path, "expected an object");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!ok.count(key)) {
            parse_fail(path, "unknown key '" + key + "'");
        }
    }
}

const json& member(const json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        parse_fail(path, std::string("missing key '") + key + "'");
    }
    return *it;
}

long long get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        parse_fail(path, "expected an integer");
    }
    return j.get<long long>();
}

std::size_t get_natural(const json& j, const std::string& path) {
    const long long v = get_int(j, path);
    if (v < 0) {
        parse_fail(path, "expected a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

Scalar get_scalar(const FieldSpec& field, const json& j, const std::string& path) {
    if (j.is_number_integer()) {
        return Scalar::from_int(field, j.get<long long>());
    }
    if (j.is_string()) {
        try {
            return Scalar::parse(field, j.get<std::string>());
        } catch (const Error& e) {
            parse_fail(path, e.what());
        }
    }
    parse_fail(path, "expected an integer or a fraction string");
}

/// List of rows; `cols` fixes the row length.
Matrix get_rows(const FieldSpec& field, const json& j, const std::string& path, std::size_t cols) {
    if (!j.is_array()) {
        parse_fail(path, "expected a list of rows");
    }
    Matrix m(field, j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string rp = path + "/" + std::to_string(r);
        if (!j[r].is_array()) {
            parse_fail(rp, "expected a row");
        }
        if (j[r].size() != cols) {
            invalid(rp, "row has " + std::to_string(j[r].size()) + " entries, expected " + std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m.set(r, c, get_scalar(field, j[r][c], rp + "/" + std::to_string(c)));
        }
    }
    return m;
}

json scalar_json(const Scalar& s) {
    if (s.field().is_finite()) {
        return s.residue();
    }
    return s.to_string();
}

json rows_json(const Matrix& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(scalar_json(m.at(r, c)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

// Profiles

DimensionProfile parse_profile(const FieldSpec& field, const json& j, const std::string& path) {
    if (!j.is_object()) {
        parse_fail(path, "expected an object");
    }
    for (const char* named : {"constant", "discrete", "compact"}) {
        if (j.contains(named)) {
            require_keys(j, path, {named});
            const std::size_t d = get_natural(j.at(named), path + "/" + named);
            if (std::string(named) == "constant") {
                return DimensionProfile::constant(field, d);
            }
            if (std::string(named) == "discrete") {
                return DimensionProfile::discrete(field, d);
            }
            return DimensionProfile::compact(field, d);
        }
    }
    require_keys(j, path, {"d_left", "n_left", "boundary", "d_right"});
    const std::size_t d_left = get_natural(member(j, path, "d_left"), path + "/d_left");
    const long long n_left = get_int(member(j, path, "n_left"), path + "/n_left");
    const std::size_t d_right = get_natural(member(j, path, "d_right"), path + "/d_right");
    const json& b = member(j, path, "boundary");
    if (!b.is_array()) {
        parse_fail(path + "/boundary", "expected a list of dimensions");
    }
    std::vector<std::size_t> boundary;
    for (std::size_t i = 0; i < b.size(); ++i) {
        boundary.push_back(get_natural(b[i], path + "/boundary/" + std::to_string(i)));
    }
    if (n_left > 0 || n_left + static_cast<long long>(boundary.size()) - 1 < 0) {
        invalid(path, "the boundary levels [n_left, n_left + len - 1] must contain 0");
    }
    return DimensionProfile(field, d_left, static_cast<int>(n_left), boundary, d_right);
}

json profile_json(const DimensionProfile& p) {
    return json{{"d_left", p.d_left()}, {"n_left", p.n_left()}, {"boundary", p.boundary()}, {"d_right", p.d_right()}};
}

// Operators

std::vector<Matrix> parse_blocks(const DimensionProfile& p, const json* j, const std::string& path, std::size_t width,
                                 std::size_t d) {
    std::vector<Matrix> blocks(2 * width + 1, Matrix(p.field(), d, d));
    if (!j) {
        return blocks;
    }
    if (!j->is_object()) {
        parse_fail(path, "expected an object keyed by offset");
    }
    for (const auto& [key, value] : j->items()) {
        int offset = 0;
        try {
            std::size_t used = 0;
            offset = std::stoi(key, &used);
            if (used != key.size()) {
                throw std::invalid_argument(key);
            }
        } catch (const std::exception&) {
            parse_fail(path, "unknown key '" + key + "' (expected an offset)");
        }
        if (std::abs(offset) > iw(width)) {
            invalid(path + "/" + key, "band exceeded: offset " + key + " beyond width " + std::to_string(width));
        }
        const std::string bp = path + "/" + key;
        if (!value.is_array() || value.size() != d || (d > 0 && (!value[0].is_array() || value[0].size() != d))) {
            invalid(bp, "block dimension mismatch: expected " + std::to_string(d) + "x" + std::to_string(d));
        }
        blocks[static_cast<std::size_t>(offset + iw(width))] = get_rows(p.field(), value, bp, d);
    }
    return blocks;
}

BandedOperator parse_operator(const DimensionProfile& p, const json& j, const std::string& path) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "right_shift" || name == "left_shift") {
            if (!p.is_constant()) {
                invalid(path, name + " requires a constant profile");
            }
            return make_shift(p, name == "right_shift" ? ShiftDirection::Right : ShiftDirection::Left);
        }
        if (name == "identity") {
            return BandedOperator::identity(p);
        }
        if (name == "zero") {
            return BandedOperator::zero(p);
        }
        parse_fail(path, "unknown operator '" + name + "'");
    }
    require_keys(j, path, {"width", "left_blocks", "right_blocks", "boundary"});
    const std::size_t width = get_natural(member(j, path, "width"), path + "/width");
    const int w = iw(width);
    auto find = [&](const char* key) { return j.contains(key) ? &j.at(key) : nullptr; };
    OperatorData data{p, width, parse_blocks(p, find("left_blocks"), path + "/left_blocks", width, p.d_left()),
                      parse_blocks(p, find("right_blocks"), path + "/right_blocks", width, p.d_right()),
                      p.n_left() - w, p.n_right() + w, {}};
    if (const json* b = find("boundary")) {
        const std::string bp = path + "/boundary";
        require_keys(*b, bp, {"lo", "hi", "columns"});
        data.boundary_lo = static_cast<int>(get_int(member(*b, bp, "lo"), bp + "/lo"));
        data.boundary_hi = static_cast<int>(get_int(member(*b, bp, "hi"), bp + "/hi"));
        const json* cols = b->contains("columns") ? &b->at("columns") : nullptr;
        if (cols && !cols->is_array()) {
            parse_fail(bp + "/columns", "expected a list of columns");
        }
        for (std::size_t c = 0; cols && c < cols->size(); ++c) {
            const std::string cp = bp + "/columns/" + std::to_string(c);
            const json& col = (*cols)[c];
            require_keys(col, cp, {"level", "slot", "image"});
            BoundaryColumn bc{static_cast<int>(get_int(member(col, cp, "level"), cp + "/level")),
                              get_natural(member(col, cp, "slot"), cp + "/slot"), LlcVector(p)};
            const json& image = member(col, cp, "image");
            if (!image.is_array()) {
                parse_fail(cp + "/image", "expected a list of [level, slot, value]");
            }
            for (std::size_t e = 0; e < image.size(); ++e) {
                const std::string ep = cp + "/image/" + std::to_string(e);
                if (!image[e].is_array() || image[e].size() != 3) {
                    parse_fail(ep, "expected [level, slot, value]");
                }
                const int level = static_cast<int>(get_int(image[e][0], ep + "/0"));
                const std::size_t slot = get_natural(image[e][1], ep + "/1");
                if (slot >= p.dim(level)) {
                    invalid(ep, "slot " + std::to_string(slot) + " beyond d(" + std::to_string(level) +
                                    ") = " + std::to_string(p.dim(level)));
                }
                bc.image.add(Coordinate{level, slot}, get_scalar(p.field(), image[e][2], ep + "/2"));
            }
            data.columns.push_back(std::move(bc));
        }
    } else {
        // Stationary everywhere: levels <= 0 follow the left blocks, levels > 0 the right blocks.
        for (int n = data.boundary_lo; n <= data.boundary_hi; ++n) {
            const auto& blocks = n <= 0 ? data.left_blocks : data.right_blocks;
            const std::size_t d = n <= 0 ? p.d_left() : p.d_right();
            if (p.dim(n) != d) {
                invalid(path, "block dimension mismatch: level " + std::to_string(n) + " has dimension " +
                                  std::to_string(p.dim(n)) + " but its blocks are " + std::to_string(d) + "x" +
                                  std::to_string(d) + "; give an explicit boundary");
            }
            for (std::size_t i = 0; i < d; ++i) {
                BoundaryColumn bc{n, i, LlcVector(p)};
                for (int jj = -w; jj <= w; ++jj) {
                    const Matrix& blk = blocks[static_cast<std::size_t>(jj + w)];
                    for (std::size_t r = 0; r < d; ++r) {
                        if (!blk.at(r, i).is_zero()) {
                            if (p.dim(n + jj) != d) {
                                invalid(path, "block dimension mismatch: level " + std::to_string(n + jj) +
                                                  " has dimension " + std::to_string(p.dim(n + jj)) +
                                                  "; give an explicit boundary");
                            }
                            bc.image.add(Coordinate{n + jj, r}, blk.at(r, i));
                        }
                    }
                }
                data.columns.push_back(std::move(bc));
            }
        }
    }
    auto violations = validate(data);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& v : violations) {
            msg += (msg.empty() ? "" : "; ") + v;
        }
        invalid(path, msg);
    }
    return BandedOperator::from_data(data);
}

json blocks_json(const std::vector<Matrix>& blocks, std::size_t width) {
    json out = json::object();
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (!blocks[k].is_zero()) {
            out[std::to_string(iw(k) - iw(width))] = rows_json(blocks[k]);
        }
    }
    return out;
}

json operator_json(const BandedOperator& op) {
    auto data = op.to_data();
    json columns = json::array();
    for (const auto& c : data.columns) {
        if (c.image.is_zero()) {
            continue;
        }
        json image = json::array();
        for (const auto& [coord, v] : c.image.entries()) {
            image.push_back(json::array({coord.level, coord.slot, scalar_json(v)}));
        }
        columns.push_back(json{{"level", c.level}, {"slot", c.slot}, {"image", image}});
    }
    return json{{"width", data.width},
                {"left_blocks", blocks_json(data.left_blocks, data.width)},
                {"right_blocks", blocks_json(data.right_blocks, data.width)},
                {"boundary", json{{"lo", data.boundary_lo}, {"hi", data.boundary_hi}, {"columns", columns}}}};
}

// Subspaces and patterns

CompactOpenSubspace parse_subspace(const DimensionProfile& p, const json& j, const std::string& path) {
    if (j.is_object() && j.contains("chain")) {
        require_keys(j, path, {"chain"});
        return cofinal_chain(p, static_cast<int>(get_natural(j.at("chain"), path + "/chain")));
    }
    require_keys(j, path, {"tail_cut", "window_top", "basis"});
    const int a = static_cast<int>(get_int(member(j, path, "tail_cut"), path + "/tail_cut"));
    const int top = static_cast<int>(get_int(member(j, path, "window_top"), path + "/window_top"));
    if (top < a) {
        invalid(path, "window_top below tail_cut");
    }
    const std::size_t cols = p.window_dim(a, top);
    Matrix gens = j.contains("basis") ? get_rows(p.field(), j.at("basis"), path + "/basis", cols)
                                      : Matrix(p.field(), 0, cols);
    return canonicalize(RawOpenSubspace{p, a, top, gens});
}

json subspace_json(const CompactOpenSubspace& u) {
    return json{{"tail_cut", u.tail_cut()}, {"window_top", u.window_top()}, {"basis", rows_json(u.window_basis().basis())}};
}

SubspaceBasis parse_basis(const FieldSpec& field, const json& j, const std::string& path, std::size_t d) {
    return SubspaceBasis::span_of(get_rows(field, j, path, d));
}

BlockwisePattern parse_pattern(const DimensionProfile& p, const json& j, const std::string& path) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "full") {
            return BlockwisePattern::full(p);
        }
        if (name == "zero") {
            return BlockwisePattern::zero(p);
        }
        parse_fail(path, "unknown pattern '" + name + "'");
    }
    if (j.is_object() && j.contains("slots")) {
        require_keys(j, path, {"slots"});
        const json& s = j.at("slots");
        if (!s.is_array()) {
            parse_fail(path + "/slots", "expected a list of slot indices");
        }
        std::vector<std::size_t> slots;
        for (std::size_t i = 0; i < s.size(); ++i) {
            slots.push_back(get_natural(s[i], path + "/slots/" + std::to_string(i)));
        }
        return BlockwisePattern::slots(p, slots);
    }
    require_keys(j, path, {"m_left", "levels", "left", "right"});
    const int m_left = static_cast<int>(get_int(member(j, path, "m_left"), path + "/m_left"));
    const json& levels = member(j, path, "levels");
    if (!levels.is_array()) {
        parse_fail(path + "/levels", "expected a list of level bases");
    }
    std::vector<SubspaceBasis> bases;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const int n = m_left + iw(i);
        bases.push_back(parse_basis(p.field(), levels[i], path + "/levels/" + std::to_string(i), p.dim(n)));
    }
    auto left = parse_basis(p.field(), member(j, path, "left"), path + "/left", p.d_left());
    auto right = parse_basis(p.field(), member(j, path, "right"), path + "/right", p.d_right());
    try {
        return BlockwisePattern(p, m_left, bases, left, right);
    } catch (const Error& e) {
        invalid(path, e.what());
    }
}

json pattern_json(const BlockwisePattern& w) {
    json levels = json::array();
    for (const auto& b : w.levels()) {
        levels.push_back(rows_json(b.basis()));
    }
    return json{{"m_left", w.m_left()},
                {"levels", levels},
                {"left", rows_json(w.left().basis())},
                {"right", rows_json(w.right().basis())}};
}

EntropyConfig parse_config(const json& j, const std::string& path) {
    require_keys(j, path, {"plateau_streak", "max_trajectory_steps", "max_chain_index", "strict"});
    EntropyConfig cfg;
    if (j.contains("plateau_streak")) {
        cfg.plateau_streak = get_natural(j.at("plateau_streak"), path + "/plateau_streak");
    }
    if (j.contains("max_trajectory_steps")) {
        cfg.max_trajectory_steps = get_natural(j.at("max_trajectory_steps"), path + "/max_trajectory_steps");
    }
    if (j.contains("max_chain_index")) {
        cfg.max_chain_index = get_natural(j.at("max_chain_index"), path + "/max_chain_index");
    }
    if (j.contains("strict")) {
        if (!j.at("strict").is_boolean()) {
            parse_fail(path + "/strict", "expected a boolean");
        }
        cfg.strict = j.at("strict").get<bool>();
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        invalid(path, e.what());
    }
    return cfg;
}

json config_json(const EntropyConfig& c) {
    return json{{"plateau_streak", c.plateau_streak},
                {"max_trajectory_steps", c.max_trajectory_steps},
                {"max_chain_index", c.max_chain_index},
                {"strict", c.strict}};
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

SpecFile parse_spec(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        fail(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                        ": malformed JSON (" + e.what() + ")");
    }
    require_keys(j, "", {"schema_version", "field", "profile", "operator", "inverse", "subspace", "pattern",
                         "pattern_chain", "k", "conjugator", "conjugator_inverse", "second", "config", "campaign"});
    if (j.contains("schema_version") && get_int(j.at("schema_version"), "/schema_version") != kSchemaVersion) {
        invalid("/schema_version", "unsupported schema version");
    }
    const json& fj = member(j, "", "field");
    if (!fj.is_string()) {
        parse_fail("/field", "expected \"GF(p)\" or \"Q\"");
    }
    FieldSpec field = FieldSpec::prime(2);
    try {
        field = FieldSpec::parse(fj.get<std::string>());
    } catch (const Error& e) {
        invalid("/field", e.what());
    }
    try {
        auto profile = parse_profile(field, member(j, "", "profile"), "/profile");
        auto op = parse_operator(profile, member(j, "", "operator"), "/operator");
        SpecFile spec{profile, op, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
        if (j.contains("inverse")) {
            spec.inverse = parse_operator(profile, j.at("inverse"), "/inverse");
        }
        if (j.contains("subspace")) {
            spec.subspace = parse_subspace(profile, j.at("subspace"), "/subspace");
        }
        if (j.contains("pattern")) {
            spec.pattern = parse_pattern(profile, j.at("pattern"), "/pattern");
        }
        if (j.contains("pattern_chain")) {
            const json& c = j.at("pattern_chain");
            if (!c.is_array()) {
                parse_fail("/pattern_chain", "expected a list of patterns");
            }
            for (std::size_t i = 0; i < c.size(); ++i) {
                spec.pattern_chain.push_back(parse_pattern(profile, c[i], "/pattern_chain/" + std::to_string(i)));
            }
        }
        if (j.contains("k")) {
            spec.k = get_natural(j.at("k"), "/k");
        }
        if (j.contains("conjugator")) {
            spec.conjugator = parse_operator(profile, j.at("conjugator"), "/conjugator");
        }
        if (j.contains("conjugator_inverse")) {
            spec.conjugator_inverse = parse_operator(profile, j.at("conjugator_inverse"), "/conjugator_inverse");
        }
        if (j.contains("second")) {
            const json& s = j.at("second");
            require_keys(s, "/second", {"profile", "operator", "inverse"});
            auto p2 = parse_profile(field, member(s, "/second", "profile"), "/second/profile");
            SecondSpace second{p2, parse_operator(p2, member(s, "/second", "operator"), "/second/operator"), {}};
            if (s.contains("inverse")) {
                second.inverse = parse_operator(p2, s.at("inverse"), "/second/inverse");
            }
            spec.second = std::move(second);
        }
        if (j.contains("config")) {
            spec.config = parse_config(j.at("config"), "/config");
        }
        if (j.contains("campaign")) {
            const json& c = j.at("campaign");
            require_keys(c, "/campaign", {"kind", "instances"});
            const json& kind = member(c, "/campaign", "kind");
            if (!kind.is_string() || (kind.get<std::string>() != "automorphisms" && kind.get<std::string>() != "addition")) {
                parse_fail("/campaign/kind", "expected \"automorphisms\" or \"addition\"");
            }
            spec.campaign = CampaignSpec{kind.get<std::string>(),
                                         get_natural(member(c, "/campaign", "instances"), "/campaign/instances")};
        }
        return spec;
    } catch (const Error& e) {
        switch (e.code()) {
            case ErrorCode::ParseError:
            case ErrorCode::ValidationError: throw;
            default: fail(ErrorCode::ValidationError, e.what());
        }
    }
}

std::string serialize_spec(const SpecFile& spec) {
    json j{{"schema_version", kSchemaVersion},
           {"field", spec.profile.field().to_string()},
           {"profile", profile_json(spec.profile)},
           {"operator", operator_json(spec.op)},
           {"config", config_json(spec.config)}};
    if (spec.inverse) {
        j["inverse"] = operator_json(*spec.inverse);
    }
    if (spec.subspace) {
        j["subspace"] = subspace_json(*spec.subspace);
    }
    if (spec.pattern) {
        j["pattern"] = pattern_json(*spec.pattern);
    }
    if (!spec.pattern_chain.empty()) {
        json chain = json::array();
        for (const auto& w : spec.pattern_chain) {
            chain.push_back(pattern_json(w));
        }
        j["pattern_chain"] = chain;
    }
    if (spec.k) {
        j["k"] = *spec.k;
    }
    if (spec.conjugator) {
        j["conjugator"] = operator_json(*spec.conjugator);
    }
    if (spec.conjugator_inverse) {
        j["conjugator_inverse"] = operator_json(*spec.conjugator_inverse);
    }
    if (spec.second) {
        json s{{"profile", profile_json(spec.second->profile)}, {"operator", operator_json(spec.second->op)}};
        if (spec.second->inverse) {
            s["inverse"] = operator_json(*spec.second->inverse);
        }
        j["second"] = s;
    }
    if (spec.campaign) {
        j["campaign"] = json{{"kind", spec.campaign->kind}, {"instances", spec.campaign->instances}};
    }
    return j.dump(2) + "\n";
}

// Reports

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::EngineDisagreement: return 4;
        case ErrorCode::EngineInvariant: return 70;
        default: return 2;
    }
}

int exit_code_for(const OutcomeFlags& flags, bool strict) {
    if (flags.violated) {
        return 1;
    }
    if (flags.disagreement) {
        return 4;
    }
    if (strict && (flags.lower_bound || flags.inconclusive)) {
        return 3;
    }
    return 0;
}

namespace {

struct Payload {
    json results = json::array();
    std::vector<std::string> text;
    bool lower_bound = false;
    bool inconclusive = false;
    bool violated = false;
    bool disagreement = false;
    std::vector<std::string> diagnostics;
};

json result_json(const EntropyResult& r, const FieldSpec& field) {
    json j{{"value", r.value},
           {"status", std::string(status_name(r.status))},
           {"certificate", r.certificate},
           {"iterations", r.iterations}};
    if (r.witness) {
        j["witness"] = subspace_json(*r.witness);
    }
    if (field.is_finite()) {
        auto h = h_alg_value(r, field);
        j["h_alg"] = json{{"ent", h.ent},
                          {"factor", "log " + std::to_string(h.characteristic)},
                          {"symbolic", h.symbolic},
                          {"decimal", h.decimal}};
    }
    return j;
}

std::string result_text(const std::string& label, const EntropyResult& r, const FieldSpec& field) {
    std::ostringstream out;
    out << label << " = " << r.value << " (" << status_name(r.status) << ", " << r.iterations << " iterations)";
    out << " certificate [";
    for (std::size_t i = 0; i < r.certificate.size(); ++i) {
        out << (i ? "," : "") << r.certificate[i];
    }
    out << "]";
    if (field.is_finite()) {
        auto h = h_alg_value(r, field);
        out << " h_alg = " << h.symbolic << " = " << h.decimal;
    }
    return out.str();
}

json term_json(const Term& t) {
    return json{{"label", t.label},
                {"factor", t.factor},
                {"value", t.result.value},
                {"status", std::string(status_name(t.result.status))},
                {"certificate", t.result.certificate}};
}

json property_json(const PropertyReport& r) {
    json comparisons = json::array();
    for (const auto& c : r.comparisons) {
        json lhs = json::array();
        json rhs = json::array();
        for (const auto& t : c.lhs) {
            lhs.push_back(term_json(t));
        }
        for (const auto& t : c.rhs) {
            rhs.push_back(term_json(t));
        }
        comparisons.push_back(json{{"lhs", lhs},
                                   {"rhs", rhs},
                                   {"relation", c.relation == Relation::Equal ? "=" : ">="},
                                   {"lhs_value", c.lhs_value()},
                                   {"rhs_value", c.rhs_value()}});
    }
    json side = json::array();
    for (const auto& [name, passed] : r.side_checks) {
        side.push_back(json{{"name", name}, {"passed", passed}});
    }
    return json{{"property", r.property},
                {"inputs", r.inputs},
                {"verdict", std::string(verdict_name(r.verdict))},
                {"witness", r.witness},
                {"comparisons", comparisons},
                {"side_checks", side}};
}

std::string property_text(const PropertyReport& r) {
    std::ostringstream out;
    out << r.property << ": " << verdict_name(r.verdict);
    for (const auto& c : r.comparisons) {
        out << "\n  ";
        for (std::size_t i = 0; i < c.lhs.size(); ++i) {
            out << (i ? " + " : "") << (c.lhs[i].factor != 1 ? std::to_string(c.lhs[i].factor) + "*" : "")
                << c.lhs[i].label << "=" << c.lhs[i].result.value << " [" << status_name(c.lhs[i].result.status)
                << "]";
        }
        out << (c.relation == Relation::Equal ? " = " : " >= ");
        for (std::size_t i = 0; i < c.rhs.size(); ++i) {
            out << (i ? " + " : "") << (c.rhs[i].factor != 1 ? std::to_string(c.rhs[i].factor) + "*" : "")
                << c.rhs[i].label << "=" << c.rhs[i].result.value << " [" << status_name(c.rhs[i].result.status)
                << "]";
        }
    }
    for (const auto& [name, passed] : r.side_checks) {
        out << "\n  " << (passed ? "ok: " : "FAILED: ") << name;
    }
    if (!r.witness.empty()) {
        out << "\n  witness: " << r.witness;
    }
    return out.str();
}

void add_entropy(Payload& pl, const std::string& kind, const std::string& engine, const EntropyResult& r,
                 const FieldSpec& field) {
    json j = result_json(r, field);
    j["kind"] = kind;
    j["engine"] = engine;
    pl.results.push_back(std::move(j));
    pl.text.push_back(result_text(kind + " [" + engine + "]", r, field));
    pl.lower_bound = pl.lower_bound || r.status == EntropyStatus::LowerBound;
}

void add_property(Payload& pl, const PropertyReport& r) {
    pl.results.push_back(property_json(r));
    pl.text.push_back(property_text(r));
    pl.inconclusive = pl.inconclusive || r.verdict == Verdict::Inconclusive;
    pl.violated = pl.violated || r.verdict == Verdict::Violated;
}

EngineChoice default_engine(const CommandOptions& o, const SpecFile& spec) {
    if (o.engine) {
        return *o.engine;
    }
    return spec.inverse ? EngineChoice::Both : EngineChoice::Trajectory;
}

void require_inverse_present(const SpecFile& spec) {
    if (!spec.inverse) {
        fail(ErrorCode::PreconditionFailed, "limit-free engine requires a verified inverse");
    }
}

template <class T>
const T& need(const std::optional<T>& v, const std::string& what) {
    if (!v) {
        fail(ErrorCode::PreconditionFailed, what);
    }
    return *v;
}

void run_check(const CommandOptions& o, const SpecFile& spec, const EntropyConfig& cfg, Payload& pl) {
    const std::string& kind = o.check_kind;
    if (kind == "campaign") {
        const auto& c = need(spec.campaign, "check campaign requires a campaign entry");
        auto summary = c.kind == "addition" ? run_addition_campaign(o.seed, c.instances, cfg)
                                            : run_automorphism_campaign(o.seed, c.instances, cfg);
        json violations = json::array();
        for (const auto& v : summary.violations) {
            violations.push_back(property_json(v));
        }
        pl.results.push_back(json{{"campaign", summary.name},
                                  {"seed", summary.seed},
                                  {"instances", summary.instances},
                                  {"verified", summary.verified},
                                  {"violated", summary.violated},
                                  {"inconclusive", summary.inconclusive},
                                  {"violations", violations}});
        std::ostringstream t;
        t << "campaign " << summary.name << " seed " << summary.seed << ": " << summary.instances
          << " instances, verified " << summary.verified << ", violated " << summary.violated << ", inconclusive "
          << summary.inconclusive;
        pl.text.push_back(t.str());
        for (const auto& v : summary.violations) {
            pl.text.push_back(property_text(v));
        }
        pl.violated = summary.violated > 0;
        pl.inconclusive = summary.inconclusive > 0;
        return;
    }
    auto parsed = parse_property_kind(kind);
    if (!parsed) {
        fail(ErrorCode::ValidationError, "unknown check kind '" + kind + "'");
    }
    switch (*parsed) {
        case PropertyKind::Addition:
            add_property(pl, check_addition(spec.op, need(spec.pattern, "check addition requires a pattern"), cfg,
                                            spec.inverse));
            break;
        case PropertyKind::LogLaw:
            add_property(pl, check_log_law(spec.op, need(spec.k, "check log_law requires k"), cfg, spec.inverse));
            break;
        case PropertyKind::Conjugation:
            add_property(pl, check_conjugation(spec.op, need(spec.conjugator, "check conjugation requires a conjugator"),
                                               need(spec.conjugator_inverse,
                                                    "check conjugation requires conjugator_inverse"),
                                               cfg, spec.inverse));
            break;
        case PropertyKind::WeakAddition: {
            const auto& s = need(spec.second, "check weak_addition requires a second space");
            add_property(pl, check_weak_addition(spec.op, s.op, cfg, spec.inverse, s.inverse));
            break;
        }
        case PropertyKind::Monotonicity:
            add_property(pl, check_monotonicity(spec.op, need(spec.pattern, "check monotonicity requires a pattern"),
                                                cfg));
            break;
        case PropertyKind::DdReduction: add_property(pl, check_dd_reduction(spec.op, cfg)); break;
        case PropertyKind::DirectLimit:
            if (spec.pattern_chain.empty()) {
                fail(ErrorCode::PreconditionFailed, "check direct_limit requires a pattern_chain");
            }
            add_property(pl, check_direct_limit(spec.op, spec.pattern_chain, cfg));
            break;
        case PropertyKind::EngineAgreement:
            require_inverse_present(spec);
            add_property(pl, check_engine_agreement(spec.op, *spec.inverse, cfg));
            break;
    }
}

void run_dispatch(const CommandOptions& o, const SpecFile& spec, const EntropyConfig& cfg, Payload& pl) {
    const FieldSpec& field = spec.profile.field();
    if (o.command == "entropy") {
        const auto engine = default_engine(o, spec);
        add_entropy(pl, "entropy", std::string(engine_name(engine)), total_entropy(spec.op, cfg, engine, spec.inverse),
                    field);
    } else if (o.command == "relative-entropy") {
        const auto& u = need(spec.subspace, "relative-entropy requires a subspace");
        const auto engine = default_engine(o, spec);
        add_entropy(pl, "relative_entropy", std::string(engine_name(engine)),
                    relative_entropy(spec.op, u, cfg, engine, spec.inverse), field);
    } else if (o.command == "compare-engines") {
        require_inverse_present(spec);
        EntropyResult t;
        EntropyResult l;
        std::string kind;
        if (spec.subspace) {
            kind = "relative_entropy";
            t = relative_entropy(spec.op, *spec.subspace, cfg, EngineChoice::Trajectory);
            l = relative_entropy(spec.op, *spec.subspace, cfg, EngineChoice::LimitFree, spec.inverse);
        } else {
            kind = "entropy";
            t = total_entropy(spec.op, cfg, EngineChoice::Trajectory);
            l = total_entropy(spec.op, cfg, EngineChoice::LimitFree, spec.inverse);
        }
        add_entropy(pl, kind, "trajectory", t, field);
        add_entropy(pl, kind, "limitfree", l, field);
        const bool comparable = t.status != EntropyStatus::LowerBound && l.status != EntropyStatus::LowerBound;
        pl.disagreement = comparable && t.value != l.value;
        pl.results.push_back(json{{"kind", "agreement"}, {"comparable", comparable}, {"agree", !pl.disagreement}});
        pl.text.push_back(std::string("engines ") + (!comparable ? "not comparable (LowerBound)"
                                                     : pl.disagreement ? "DISAGREE"
                                                                       : "agree"));
        if (pl.disagreement) {
            pl.diagnostics.push_back("EngineDisagreement: trajectory gives " + std::to_string(t.value) +
                                     ", limit-free gives " + std::to_string(l.value));
        }
    } else if (o.command == "shift-closed-form") {
        if (!spec.profile.is_constant()) {
            fail(ErrorCode::NonConstantProfile, "shift-closed-form requires a constant profile");
        }
        std::optional<ShiftDirection> dir;
        if (spec.op == make_shift(spec.profile, ShiftDirection::Right)) {
            dir = ShiftDirection::Right;
        } else if (spec.op == make_shift(spec.profile, ShiftDirection::Left)) {
            dir = ShiftDirection::Left;
        } else {
            fail(ErrorCode::ValidationError, "shift-closed-form requires the operator to be right_shift or left_shift");
        }
        const std::size_t k = spec.k.value_or(1);
        EntropyResult r;
        r.value = shift_closed_form(spec.profile, *dir, k);
        r.status = EntropyStatus::Exact;
        r.certificate = {r.value};
        json j = result_json(r, field);
        j["kind"] = "shift_closed_form";
        j["direction"] = *dir == ShiftDirection::Right ? "right" : "left";
        j["k"] = k;
        pl.results.push_back(std::move(j));
        pl.text.push_back(result_text(std::string("ent(") + (*dir == ShiftDirection::Right ? "right" : "left") +
                                          " shift ^ " + std::to_string(k) + ")",
                                      r, field));
    } else if (o.command == "check") {
        run_check(o, spec, cfg, pl);
    } else {
        fail(ErrorCode::ValidationError, "unknown command '" + o.command + "'");
    }
}

}  // namespace

CommandOutcome run_command(const CommandOptions& options, const SpecFile& spec) {
    EntropyConfig cfg = spec.config;
    if (options.max_iter) {
        cfg.max_trajectory_steps = *options.max_iter;
    }
    if (options.streak) {
        cfg.plateau_streak = *options.streak;
    }
    if (options.chain_max) {
        cfg.max_chain_index = *options.chain_max;
    }
    cfg.strict = cfg.strict || options.strict;

    CommandOutcome out;
    Payload pl;
    try {
        cfg.validate();
        run_dispatch(options, spec, cfg, pl);
    } catch (const Error& e) {
        out.exit_code = exit_code_for(e.code());
        out.diagnostics.push_back(e.what());
        return out;
    }
    out.diagnostics = pl.diagnostics;
    out.exit_code = exit_code_for(OutcomeFlags{pl.violated, pl.disagreement, pl.lower_bound, pl.inconclusive}, cfg.strict);
    if (out.exit_code == 3) {
        out.diagnostics.push_back(pl.lower_bound ? "strict: a result is only a LowerBound"
                                                 : "strict: a check is Inconclusive");
    }
    if (options.format == OutputFormat::Text) {
        std::string text;
        for (const auto& line : pl.text) {
            text += line + "\n";
        }
        out.report = text;
    } else {
        json report{{"schema_version", kSchemaVersion},
                    {"tool", kToolName},
                    {"version", kToolVersion},
                    {"command", options.command},
                    {"seed", options.seed},
                    {"config", config_json(cfg)},
                    {"results", pl.results}};
        if (options.command == "check") {
            report["check"] = options.check_kind;
        }
        report["exit_code"] = out.exit_code;
        out.report = report.dump(2) + "\n";
    }
    return out;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Algebraic entropy of banded operators on locally linearly compact spaces", kToolName};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    CommandOptions opts;
    std::string path;
    std::string engine;
    std::string format = "json";
    std::size_t max_iter = 0;
    std::size_t streak = 0;
    std::size_t chain_max = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("spec", path, "Spec file (JSON), or - for standard input")->required();
        sub->add_option("--engine", engine, "trajectory, limitfree or both")
            ->check(CLI::IsMember({"trajectory", "limitfree", "both"}));
        sub->add_option("--max-iter", max_iter, "Trajectory step cap")->check(CLI::PositiveNumber);
        sub->add_option("--streak", streak, "Plateau streak length")->check(CLI::PositiveNumber);
        sub->add_option("--chain-max", chain_max, "Largest cofinal chain index")->check(CLI::PositiveNumber);
        sub->add_flag("--strict", opts.strict, "Exit 3 when a result is only a LowerBound or Inconclusive");
        sub->add_option("--seed", opts.seed, "Campaign seed");
        sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    };
    const std::pair<const char*, const char*> commands[] = {
        {"entropy", "Total entropy ent(phi)"},
        {"relative-entropy", "Entropy H(phi, U) relative to the spec subspace"},
        {"shift-closed-form", "ent of a power of a Bernoulli shift by the closed form"},
        {"compare-engines", "Trajectory and limit-free engines side by side"},
    };
    for (const auto& [name, help] : commands) {
        add_common(app.add_subcommand(name, help));
    }
    auto* check = app.add_subcommand("check", "Check a structural identity on the spec");
    check->add_option("kind", opts.check_kind,
                      "addition, log_law, conjugation, weak_addition, monotonicity, dd_reduction, direct_limit, "
                      "engine_agreement or campaign")
        ->required();
    add_common(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
    opts.command = app.get_subcommands().front()->get_name();
    if (!engine.empty()) {
        opts.engine = engine == "trajectory" ? EngineChoice::Trajectory
                      : engine == "limitfree"  ? EngineChoice::LimitFree
                                               : EngineChoice::Both;
    }
    if (max_iter) {
        opts.max_iter = max_iter;
    }
    if (streak) {
        opts.streak = streak;
    }
    if (chain_max) {
        opts.chain_max = chain_max;
    }
    opts.format = format == "text" ? OutputFormat::Text : OutputFormat::Json;

    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            err << "cannot read " << path << "\n";
            return 2;
        }
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    SpecFile spec = [&]() -> SpecFile {
        try {
            return parse_spec(text);
        } catch (const Error& e) {
            err << path << ": " << e.what() << "\n";
            throw;
        }
    }();
    auto outcome = run_command(opts, spec);
    for (const auto& d : outcome.diagnostics) {
        err << d << "\n";
    }
    out << outcome.report;
    return outcome.exit_code;
}

}  // namespace llcent
