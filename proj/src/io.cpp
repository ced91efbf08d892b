#include "ssre/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

#include "ssre/error.hpp"

namespace ssre {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end || s.empty()) return std::nullopt;
    return value;
}

std::string line_ref(std::size_t line) { return "line " + std::to_string(line); }

template <typename T>
T config_number(std::string_view key, std::string_view value) {
    const auto v = parse_number<T>(value);
    if (!v) throw Error(ErrorKind::InvalidConfig, "bad value '" + std::string(value) + "' for " + std::string(key));
    return *v;
}

std::size_t config_count(std::string_view key, std::string_view value) {
    const auto v = config_number<long long>(key, value);
    if (v <= 0) throw Error(ErrorKind::InvalidConfig, std::string(key) + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<OmegaRate> parse_rates(std::string_view text) {
    std::vector<OmegaRate> rates;
    for (std::string_view part : split(text, ',')) {
        rates.emplace_back(config_number<double>("rates", part));
    }
    if (rates.empty()) throw Error(ErrorKind::InvalidConfig, "rates list is empty");
    return rates;
}

ExperimentSpec parse_config(std::string_view text, ExperimentSpec spec) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidConfig, line_ref(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key == "example") spec.example = example_from_string(value);
        else if (key == "hypothesis") spec.hypothesis = hypothesis_from_string(value);
        else if (key == "score") spec.score = score_kind_from_string(value);
        else if (key == "T") spec.T = config_count(key, value);
        else if (key == "R") spec.R = config_count(key, value);
        else if (key == "N") spec.N = config_count(key, value);
        else if (key == "M") spec.M = config_count(key, value);
        else if (key == "threads") spec.threads = static_cast<unsigned>(config_count(key, value));
        else if (key == "beta") spec.beta = config_number<double>(key, value);
        else if (key == "sigma") spec.sigma = config_number<double>(key, value);
        else if (key == "k_u_mode") spec.k_u_mode = ku_mode_from_string(value);
        else if (key == "rates") spec.rates = parse_rates(value);
        else if (key == "seed_base") spec.seed_base = config_number<std::uint64_t>(key, value);
        else if (key == "window") spec.window = window_scheme_from_string(value);
        else {
            throw Error(ErrorKind::InvalidConfig, line_ref(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    }
    return spec;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ExperimentSpec load_config(const std::filesystem::path& path, ExperimentSpec base) {
    return parse_config(read_text_file(path), std::move(base));
}

ScoreTable parse_scores_csv(std::string_view text) {
    std::vector<std::string_view> lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw Error(ErrorKind::ParseError, "line 1: missing header");

    const auto header = split(lines[0], ',');
    bool three_col = false;
    if (header.size() == 3 && header[0] == "t" && header[1] == "score_q" && header[2] == "score_p") {
        three_col = true;
    } else if (!(header.size() == 2 && header[0] == "t" && header[1] == "d")) {
        throw Error(ErrorKind::ParseError, "line 1: header must be 't,score_q,score_p' or 't,d'");
    }

    ScoreTable table;
    std::vector<double> q, p, d;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto fields = split(lines[i], ',');
        if (fields.size() != header.size()) {
            throw Error(ErrorKind::ParseError, line_ref(line_no) + ": expected " + std::to_string(header.size()) +
                                                   " fields, got " + std::to_string(fields.size()));
        }
        const auto t = parse_number<long long>(fields[0]);
        if (!t) throw Error(ErrorKind::ParseError, line_ref(line_no) + ": bad index '" + std::string(fields[0]) + "'");
        if (!table.t.empty() && *t != table.t.back() + 1) {
            throw Error(ErrorKind::OrderError, line_ref(line_no) + ": t must increase by one per row");
        }
        table.t.push_back(*t);
        std::vector<double> values;
        for (std::size_t f = 1; f < fields.size(); ++f) {
            const auto v = parse_number<double>(fields[f]);
            if (!v) throw Error(ErrorKind::ParseError, line_ref(line_no) + ": bad number '" + std::string(fields[f]) + "'");
            if (!std::isfinite(*v)) throw Error(ErrorKind::ParseError, line_ref(line_no) + ": non-finite value");
            values.push_back(*v);
        }
        if (three_col) {
            q.push_back(values[0]);
            p.push_back(values[1]);
            d.push_back(values[0] - values[1]);
        } else {
            d.push_back(values[0]);
        }
    }
    if (d.empty()) throw Error(ErrorKind::ParseError, "no data rows");
    table.series = ScoreDiffSeries::from_diffs(std::move(d));
    if (three_col) {
        table.score_q = std::move(q);
        table.score_p = std::move(p);
    }
    return table;
}

ScoreTable read_scores_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_scores_csv(os.str());
}

ScoreDiffSeries ingest_scores(const std::filesystem::path& path) { return read_scores_csv(path).series; }

std::string series_to_csv(const SimulatedSeries& s) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17);
    const bool combo = !s.x1.empty();
    os << (combo ? "t,y,x1,x2\n" : "t,y\n");
    for (std::size_t t = 0; t < s.y.size(); ++t) {
        os << (t + 1) << ',' << s.y[t];
        if (combo) os << ',' << s.x1[t] << ',' << s.x2[t];
        os << '\n';
    }
    return os.str();
}

}  // namespace ssre
