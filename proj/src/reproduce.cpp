#include "hoi/reproduce.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hoi/experiments.hpp"
#include "hoi/info_measures.hpp"
#include "hoi/interactions.hpp"
#include "hoi/rng.hpp"

namespace hoi {

namespace {

using nlohmann::ordered_json;

constexpr double kAnalyticTol = 1e-9;

struct CheckList {
    int total = 0;
    std::vector<std::string> failures;

    bool check(bool ok, const std::string& label) {
        ++total;
        if (!ok) failures.push_back(label);
        return ok;
    }
    bool close(double got, double want, double tol, const std::string& label) {
        std::ostringstream os;
        os << label << ": got " << got << ", expected " << want << " (tol " << tol << ")";
        return check(std::abs(got - want) <= tol, os.str());
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string pad_name(const std::string& s, std::size_t width = 32) {
    std::string t = s;
    if (t.size() < width) t.resize(width, ' ');
    return t;
}

struct ExpectedDagRow {
    const char* target;
    double expected;  // reference point estimate at m = 100k, sigma = 0.4
    bool significant; // F < 0.05 expected
};

struct ExpectedDag {
    const char* name;
    int table_no;
    ExpectedDagRow rows[4];
};

// Reference interaction estimates and the expected sign/significance
// pattern for the six dynamics.
constexpr ExpectedDag kExpectedDags[] = {
    {"chain", 5,
     {{"01", 4.281, true}, {"02", 0.056, false}, {"12", 4.249, true}, {"012", -0.052, false}}},
    {"fork", 6,
     {{"01", 4.268, true}, {"02", 4.257, true}, {"12", -0.014, false}, {"012", 0.020, false}}},
    {"collider_additive", 7,
     {{"01", 2.144, true}, {"02", -0.989, true}, {"12", 2.144, true}, {"012", 0.003, false}}},
    {"collider_multiplicative", 8,
     {{"01", 0.032, false}, {"02", -2.156, true}, {"12", 0.036, false}, {"012", 4.237, true}}},
    {"collider_chain_additive", 9,
     {{"01", 2.103, true}, {"02", 3.288, true}, {"12", 2.113, true}, {"012", 0.050, false}}},
    {"collider_chain_multiplicative", 10,
     {{"01", -0.017, false}, {"02", 2.094, true}, {"12", -0.057, false}, {"012", 4.359, true}}},
};

struct GateExpectation {
    Gate gate;
    double i_ratio;      // I_ABC in units of I = 4 ln(p/eps)
    double i_star_ratio; // I*_A
    double j_a_ratio;    // J*_A
    double j_c_ratio;    // J*_C
    double j_bar_ratio;  // in units of I^3
    double h_c;          // bits, eps -> 0
    double h_ac;
    double mi;           // bits, eps -> 0
};

}  // namespace

double ReproduceConfig::mfi_tolerance() const {
    return 0.2 * std::sqrt(100000.0 / static_cast<double>(m));
}

ReproduceResult reproduce_study(const ReproduceConfig& config) {
    if (config.outdir.empty()) throw InvalidArgument("reproduce: output directory required");
    if (config.m < 100) throw InvalidArgument("reproduce: need at least 100 samples");
    if (config.n_boot < 10) throw InvalidArgument("reproduce: need at least 10 resamples");

    CheckList checks;
    std::vector<std::pair<std::string, std::string>> files;  // name -> content

    const double h_and_c = 2.0 - 0.75 * std::log2(3.0);          // entropy of a 3/4-1/4 bit
    const double mi_and = 1.0 - 0.75 * std::log2(3.0);           // co-information, AND family
    const GateExpectation gate_rows[] = {
        {Gate::Xnor, 1.0, 0.5, 1.5, 1.5, 27.0 / 8.0, 1.0, 2.0, -1.0},
        {Gate::Xor, -1.0, -0.5, -1.5, -1.5, -27.0 / 8.0, 1.0, 2.0, -1.0},
        {Gate::And, 0.5, 0.5, 0.5, 0.75, 3.0 / 16.0, h_and_c, 1.5, mi_and},
        {Gate::Or, -0.5, 0.0, -1.0, -0.75, -3.0 / 4.0, h_and_c, 1.5, mi_and},
        {Gate::Nand, -0.5, -0.5, -0.5, -0.75, -3.0 / 16.0, h_and_c, 1.5, mi_and},
        {Gate::Nor, 0.5, 0.0, 1.0, 0.75, 3.0 / 4.0, h_and_c, 1.5, mi_and},
    };

    // ---- Tables 1-3: gates ------------------------------------------------
    const double unit_i = 4.0 * std::log(config.gate_p / config.gate_eps);
    std::vector<Gate> gates;
    for (const auto& e : gate_rows) gates.push_back(e.gate);
    const auto rows = gate_report(gates, config.gate_p, config.gate_eps);

    ordered_json t1 = ordered_json::array();
    ordered_json t2 = ordered_json::array();
    ordered_json t3 = ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const auto& want = gate_rows[i];
        const std::string g = gate_name(row.gate);

        bool ok1 = checks.close(row.i_abc, want.i_ratio * unit_i, kAnalyticTol,
                                "table1 " + g + " I_ABC");
        ordered_json r1;
        r1["gate"] = g;
        r1["I_ABC"] = row.i_abc;
        r1["I_ABC_over_I"] = row.i_abc / unit_i;
        r1["expected_over_I"] = want.i_ratio;
        r1["pass"] = ok1;
        t1.push_back(r1);

        bool ok2 = true;
        ok2 &= checks.close(row.h_a, 1.0, kAnalyticTol, "table2 " + g + " H(A)");
        ok2 &= checks.close(row.h_c, want.h_c, kAnalyticTol, "table2 " + g + " H(C)");
        ok2 &= checks.close(row.h_ab, 2.0, kAnalyticTol, "table2 " + g + " H(A,B)");
        ok2 &= checks.close(row.h_ac, want.h_ac, kAnalyticTol, "table2 " + g + " H(A,C)");
        ok2 &= checks.close(row.h_abc, 2.0, kAnalyticTol, "table2 " + g + " H(A,B,C)");
        ordered_json r2;
        r2["gate"] = g;
        r2["H_A"] = row.h_a;
        r2["H_C"] = row.h_c;
        r2["H_AB"] = row.h_ab;
        r2["H_AC"] = row.h_ac;
        r2["H_ABC"] = row.h_abc;
        r2["pass"] = ok2;
        t2.push_back(r2);

        bool ok3 = true;
        ok3 &= checks.close(row.mi_abc, want.mi, kAnalyticTol, "table3 " + g + " MI_ABC");
        ok3 &= checks.close(row.i_star_a, want.i_star_ratio * unit_i, kAnalyticTol,
                            "table3 " + g + " I*_A");
        ok3 &= checks.close(row.j_a, want.j_a_ratio * unit_i, kAnalyticTol,
                            "table3 " + g + " J*_A");
        ok3 &= checks.close(row.j_c, want.j_c_ratio * unit_i, kAnalyticTol,
                            "table3 " + g + " J*_C");
        ok3 &= checks.close(row.j_bar, want.j_bar_ratio * unit_i * unit_i * unit_i,
                            kAnalyticTol * std::abs(unit_i * unit_i * unit_i),
                            "table3 " + g + " Jbar*");
        ordered_json r3;
        r3["gate"] = g;
        r3["MI_ABC_bits"] = row.mi_abc;
        r3["I_ABC"] = row.i_abc;
        r3["I_star_A"] = row.i_star_a;
        r3["J_star_A"] = row.j_a;
        r3["J_star_C"] = row.j_c;
        r3["J_bar"] = row.j_bar;
        r3["pass"] = ok3;
        t3.push_back(r3);
    }
    ordered_json t1_doc;
    t1_doc["p"] = config.gate_p;
    t1_doc["eps"] = config.gate_eps;
    t1_doc["I"] = unit_i;
    t1_doc["rows"] = t1;
    files.emplace_back("table1.json", t1_doc.dump(2) + "\n");
    files.emplace_back("table2.json", ordered_json{{"rows", t2}}.dump(2) + "\n");
    ordered_json t3_doc;
    t3_doc["p"] = config.gate_p;
    t3_doc["eps"] = config.gate_eps;
    t3_doc["I"] = unit_i;
    t3_doc["rows"] = t3;
    files.emplace_back("table3.json", t3_doc.dump(2) + "\n");

    // ---- Table 4 + symbolic sweep: dyadic / triadic -----------------------
    const auto dytri = dytri_report(config.dytri_eps);
    const double expected_tri = std::log(config.dytri_eps / dytri.p);
    checks.close(dytri.single_dyadic, 0.0, kAnalyticTol, "table4 dyadic single 3-point");
    checks.close(dytri.single_triadic, expected_tri, kAnalyticTol, "table4 triadic single 3-point");
    checks.close(dytri.sweep_dyadic, 0.0, 1e-7, "table4 dyadic summed sweep");
    checks.close(dytri.sweep_triadic, 64.0 * expected_tri, 1e-7 * 64.0,
                 "table4 triadic summed sweep");
    checks.check(dytri.dy_p_exp == 0 && dytri.dy_eps_exp == 0,
                 "table4 dyadic exponents (expected p^0 eps^0)");
    checks.check(dytri.tri_p_exp == -64 && dytri.tri_eps_exp == 64,
                 "table4 triadic exponents (expected p^-64 eps^64)");
    checks.check(dytri.max_shannon_gap <= kAnalyticTol,
                 "table4 Shannon measures identical between dyadic and triadic");
    const bool bits_ok_dy = dytri_support_from_bits(DyTri::Dyadic) == [] {
        auto s = dytri_support(DyTri::Dyadic);
        std::sort(s.begin(), s.end());
        return s;
    }();
    const bool bits_ok_tri = dytri_support_from_bits(DyTri::Triadic) == [] {
        auto s = dytri_support(DyTri::Triadic);
        std::sort(s.begin(), s.end());
        return s;
    }();
    checks.check(bits_ok_dy, "table4 dyadic support matches bit-level rules");
    checks.check(bits_ok_tri, "table4 triadic support matches bit-level rules");
    ordered_json t4;
    t4["dyadic_support"] = dytri_support(DyTri::Dyadic);
    t4["triadic_support"] = dytri_support(DyTri::Triadic);
    t4["bit_rule_match"] = bits_ok_dy && bits_ok_tri;
    t4["report"] = dytri.to_json();
    files.emplace_back("table4.json", t4.dump(2) + "\n");

    // ---- Tables 5-10: DAG dynamics ----------------------------------------
    const auto suite = dag_dynamics_suite(config.root_p, config.sigma);
    const double tol = config.mfi_tolerance();
    ordered_json fig4 = ordered_json::array();
    std::ostringstream fig4_txt;
    fig4_txt << "sign/significance of estimated interactions (+/- : F < 0.05, 0 : null)\n";
    for (std::size_t d = 0; d < suite.size(); ++d) {
        const auto& [name, dag] = suite[d];
        const auto& expected = kExpectedDags[d];
        const DagReport report =
            dag_report(dag, name, config.m, config.n_boot, splitmix64(config.seed + d), config.threads);

        ordered_json rows_json = ordered_json::array();
        ordered_json signs = ordered_json::array();
        fig4_txt << pad_name(name);
        for (std::size_t ri = 0; ri < report.rows.size(); ++ri) {
            const auto& row = report.rows[ri];
            const auto& want = expected.rows[ri];
            // Every entry must land near the reference value. Significant
            // entries must additionally show F < 0.05 with the expected sign.
            // Null entries are not required to keep F above threshold: a
            // true-zero interaction triggers F < 0.05 in a sizable share of
            // seeds, so that is bootstrap noise, not a reproduction failure;
            // the fixed-seed acceptance suite pins the full pattern.
            bool ok = checks.close(row.interaction, want.expected, tol,
                                   std::string("table") + std::to_string(expected.table_no) + " " +
                                       name + " [" + want.target + "] interaction");
            if (config.enforce_significance() && want.significant) {
                ok &= checks.check(row.f < 0.05, std::string("table") +
                                                     std::to_string(expected.table_no) + " " +
                                                     name + " [" + want.target +
                                                     "] expected significant, F=" + fmt(row.f));
                ok &= checks.check((row.interaction > 0) == (want.expected > 0),
                                   std::string("table") + std::to_string(expected.table_no) +
                                       " " + name + " [" + want.target + "] sign");
            }
            const char* sign = row.f < 0.05 ? (row.interaction > 0 ? "+" : "-") : "0";
            signs.push_back(sign);
            fig4_txt << "  " << want.target << ':' << sign;

            ordered_json rj = report.to_json()["rows"][ri];
            rj["expected"] = want.expected;
            rj["tolerance"] = tol;
            rj["pass"] = ok;
            rows_json.push_back(rj);
        }
        fig4_txt << '\n';
        ordered_json doc;
        doc["dag"] = name;
        doc["m"] = config.m;
        doc["n_boot"] = config.n_boot;
        doc["rows"] = rows_json;
        files.emplace_back("table" + std::to_string(expected.table_no) + ".json",
                           doc.dump(2) + "\n");
        ordered_json f4row;
        f4row["dag"] = name;
        f4row["targets"] = {"01", "02", "12", "012"};
        f4row["signs"] = signs;
        fig4.push_back(f4row);
    }
    files.emplace_back("fig4_signs.json", ordered_json{{"rows", fig4}}.dump(2) + "\n");
    files.emplace_back("fig4_signs.txt", fig4_txt.str());

    // ---- Summary -----------------------------------------------------------
    ReproduceResult result;
    result.checks_total = checks.total;
    result.checks_failed = static_cast<int>(checks.failures.size());
    result.failures = checks.failures;
    result.ok = checks.failures.empty();

    ordered_json summary;
    // The thread count is deliberately not recorded: output bytes are
    // independent of the parallelism degree.
    summary["seed"] = config.seed;
    summary["m"] = config.m;
    summary["n_boot"] = config.n_boot;
    summary["mfi_tolerance"] = tol;
    summary["significance_enforced"] = config.enforce_significance();
    summary["checks_total"] = result.checks_total;
    summary["checks_failed"] = result.checks_failed;
    summary["failures"] = result.failures;
    summary["ok"] = result.ok;
    files.emplace_back("summary.json", summary.dump(2) + "\n");
    std::ostringstream sum_txt;
    sum_txt << "checks: " << (result.checks_total - result.checks_failed) << "/"
            << result.checks_total << " passed\n";
    for (const auto& f : result.failures) sum_txt << "FAIL " << f << '\n';
    files.emplace_back("summary.txt", sum_txt.str());

    // All computation done; only now touch the filesystem.
    std::filesystem::create_directories(config.outdir);
    for (const auto& [name, content] : files) {
        const auto path = std::filesystem::path(config.outdir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("reproduce: cannot write " + path.string());
        out << content;
        result.files.push_back(name);
    }
    return result;
}

}  // namespace hoi
