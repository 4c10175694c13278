#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <qcurve/cli.hpp>

using namespace qcurve;

namespace
{

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "qcurve");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Runs the installed binary and returns its exit status and stdout.
std::pair<int, std::string> run_binary(const std::string &args)
{
    std::string cmd = std::string(QCURVE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *f = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) {
        out.append(buf, n);
    }
    int status = pclose(f);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_temp(const std::string &name, const std::string &body)
{
    auto path = std::filesystem::temp_directory_path() / ("qcurve_test_" + name);
    std::ofstream(path) << body;
    return path.string();
}

Json parsed(const Outcome &o)
{
    EXPECT_EQ(o.code, 0) << o.err;
    return Json::parse(o.out);
}

} // namespace

TEST(Cli, CompanionGoldenBytes)
{
    Outcome o = run({"companion", "--curve", "airy", "--format", "json"});
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, "{\"p\":2,\"entries\":[[\"0\",\"u\"],[\"1\",\"0\"]]}\n");
    auto [code, out] = run_binary("companion --curve airy --format json");
    EXPECT_EQ(code, 0);
    EXPECT_EQ(out, o.out);
    EXPECT_EQ(run({"companion", "--curve", "airy", "--format", "latex"}).out, "M(u) = \\begin{pmatrix} 0 & u \\\\ 1 & 0 \\end{pmatrix}\n");
    EXPECT_EQ(run({"companion", "--curve", "weyl-4", "--format", "text"}).out, "[u^4]\n");
}

TEST(Cli, NamedCurves)
{
    QuantumCurve w = cli::parse_curve(Json{{"name", "weyl-3"}});
    EXPECT_EQ(w.p, 1);
    EXPECT_EQ(w.q, 3);
    QuantumCurve a = cli::parse_curve(Json{{"name", "airy"}});
    EXPECT_EQ(a.p, 2);
    EXPECT_EQ(a.q, 1);
    EXPECT_THROW(cli::parse_curve(Json{{"name", "weyl-0"}}), input_error);
    EXPECT_THROW(cli::parse_curve(Json{{"name", "cubic"}}), input_error);
}

TEST(Cli, CurveDocuments)
{
    std::string bad = write_temp("not_a_curve.json", R"({"P":{"terms":[{"d":2,"coeff":["1"]}]},"Q":{"terms":[{"d":0,"coeff":["0","1"]}]}})");
    Outcome o = run({"companion", "--curve", "@" + bad});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("error"), std::string::npos);
    EXPECT_EQ(run_binary("companion --curve @" + bad).first, 2);

    std::string airy = write_temp("airy.json", curve_json(airy_curve()).dump());
    EXPECT_EQ(run({"companion", "--curve", "@" + airy}).out, run({"companion", "--curve", "airy"}).out);
    std::string named = write_temp("named.json", R"({"name":"weyl-2"})");
    EXPECT_EQ(run({"companion", "--curve", "@" + named, "--format", "text"}).out, "[u^2]\n");

    std::string garbage = write_temp("garbage.json", "{not json");
    EXPECT_EQ(run({"companion", "--curve", "@" + garbage}).code, 1);
    std::string schema = write_temp("schema.json", R"({"P":{"terms":[{"d":"two"}]},"Q":{"terms":[]}})");
    EXPECT_EQ(run({"companion", "--curve", "@" + schema}).code, 1);
    EXPECT_EQ(run({"companion", "--curve", "@/nonexistent/curve.json"}).code, 1);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"bogus"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3", "--symbolic", "--frobnicate"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "2", "--symbolic"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3", "--symbolic", "--format", "xml"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3", "--times", "t9=1"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3", "--times", "t1=1,t1=2"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3", "--times", "t1=1,that5=2"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3", "--times", "t1=1/"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3", "--times", "t1"}).code, 1);
    EXPECT_EQ(run({"dualize", "-p", "0", "-q", "3", "--symbolic"}).code, 1);
    EXPECT_EQ(run({"verify", "--suite", "nope"}).code, 1);
    EXPECT_EQ(run({"verify", "--suite", "fkn-25", "--format", "latex"}).code, 1);

    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3", "--times", "t1=1"}).code, 2);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "4", "--symbolic"}).code, 2);
    EXPECT_EQ(run({"dualize", "-p", "2", "-q", "3", "--symbolic", "--times", "t5=t1"}).code, 2);
    EXPECT_EQ(run({"normal-form", "-p", "2", "-q", "3", "--times", "t2=1", "--fourier"}).code, 2);
    EXPECT_EQ(run_binary("dualize -p 2 -q 3 --times t1=1").first, 2);
    EXPECT_EQ(run_binary("dualize -p 2 -q 3 --bogus").first, 1);

    Outcome help = run({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("dualize"), std::string::npos);
}

TEST(Cli, TimesParsing)
{
    cli::Options o;
    o.p = 5;
    o.q = 2;
    o.times = "t1=0, t5 = 3/5,t7=5/7";
    TimeVector tv = cli::build_times(o);
    EXPECT_EQ(tv.at(5), Scalar(Rational(3, 5)));
    EXPECT_EQ(tv.at(7), Scalar(Rational(5, 7)));
    EXPECT_TRUE(tv.at(2).is_zero());
    o.symbolic = true;
    tv = cli::build_times(o);
    EXPECT_EQ(tv.at(2), Poly::symbol({Family::plain, 2}));
    EXPECT_TRUE(tv.at(1).is_zero());
    o.times.clear();
    EXPECT_EQ(cli::build_times(o).top(), Scalar(Rational(5, 7)));
    o.times = "that1=2";
    tv = cli::build_times(o);
    EXPECT_EQ(tv.family, Family::hat);
    EXPECT_EQ(tv.at(3), Poly::symbol({Family::hat, 3}));
}

TEST(Cli, DualizeLatex)
{
    Outcome o = run({"dualize", "-p", "2", "-q", "5", "--symbolic", "--format", "latex"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.out.rfind("\\begin{eqnarray*}\n", 0), 0u);
    EXPECT_NE(o.out.find("\\hat t_{6} &=& t_{6} \\\\\n"), std::string::npos);
    EXPECT_NE(o.out.find("\\hat t_{5} &=& t_{5} - \\frac{9}{5} \\cdot t_{6}^{2} \\\\\n"), std::string::npos);
    EXPECT_NE(o.out.find("\\hat t_{7} &=& -\\frac{5}{7}\n\\end{eqnarray*}\n"), std::string::npos);
    Outcome text = run({"dualize", "-p", "2", "-q", "5", "--symbolic", "--format", "text"});
    EXPECT_NE(text.out.find("that5 = t5 - 9/5*t6^2\n"), std::string::npos);
}

TEST(Cli, RoundTrip)
{
    std::vector<std::vector<std::string>> cmds{
        {"dualize", "-p", "2", "-q", "5", "--symbolic"},
        {"dualize", "-p", "3", "-q", "2", "--times", "t1=1/3,t4=-2,t5=3/5", "--route", "both"},
        {"dualize", "-p", "2", "-q", "3", "--symbolic", "--route", "fkn"},
    };
    for (const auto &c : cmds) {
        Outcome o = run(c);
        Json j = parsed(o);
        DualityResult r = duality_from(j);
        EXPECT_EQ(duality_json(r).dump() + "\n", o.out);
        EXPECT_EQ(r.source.p, j.at("p").get<long>());
    }
    DualityResult direct = dualize_times(symbolic_times(2, 5, Family::plain, Scalar(Rational(2, 7))));
    EXPECT_EQ(duality_from(duality_json(direct)), direct);

    Outcome comp = run({"companion", "--curve", "weyl-5"});
    EXPECT_EQ(companion_from(parsed(comp)), companion_matrix(weyl_curve(5)));
    EXPECT_EQ(companion_from(parsed(run({"companion", "--curve", "airy"}))), companion_matrix(airy_curve()));

    for (const auto &args : std::vector<std::vector<std::string>>{{"psdo", "--curve", "airy"}, {"psdo", "--curve", "airy", "--order", "3"}, {"psdo", "--curve", "airy", "--kp", "3"}}) {
        Outcome o = run(args);
        PsDO A = psdo_from(parsed(o));
        EXPECT_EQ(psdo_json(A).dump() + "\n", o.out);
    }
    PsDO L = psdo_root(airy_P(), 2, 6);
    EXPECT_EQ(psdo_from(psdo_json(L)), L);
    PsDO partial = psdo_mul(L, PsDO::x(), -3);
    EXPECT_EQ(psdo_from(psdo_json(partial)), partial);

    Outcome nf = run({"normal-form", "-p", "5", "-q", "2", "--symbolic"});
    NormalFormConnection c = normal_form_from(parsed(nf));
    EXPECT_EQ(c, normal_form_from_times(symbolic_times(5, 2, Family::plain, Scalar(Rational(5, 7)))));
    Outcome lft = run({"normal-form", "-p", "2", "-q", "3", "--times", "t1=1,t5=2/5", "--fourier"});
    EXPECT_EQ(normal_form_json(normal_form_from(parsed(lft))).dump() + "\n", lft.out);

    TimeVector tv = symbolic_times(3, 4, Family::hat, Scalar(Rational(-4, 7)));
    EXPECT_EQ(time_vector_from(time_vector_json(tv)), tv);
    QuantumCurve cur = curve_from(curve_json(airy_curve()));
    EXPECT_TRUE(psdo_agree(cur.P, airy_P()));
    EXPECT_EQ(cur.q, 1);

    PuiseuxSeries s = ps_pow_rational(PuiseuxSeries::power("s", Scalar(1), Rational(3, 2)) + PuiseuxSeries::monomial("s", Scalar(Rational(1, 3)), 0), Rational(2, 3), {5});
    EXPECT_EQ(series_from(series_json(s)), s);

    NormalFormConnection airy_nf = normal_form_from_times(TimeVector{2, 1, {Scalar(0), Scalar(0), Scalar(Rational(2, 3))}});
    PhasedConnection ph = iota_twist(airy_nf);
    EXPECT_EQ(phased_from(phased_json(ph)), ph);

    for (const auto &args : std::vector<std::vector<std::string>>{{"fkn", "-p", "2", "-q", "3", "--symbolic"}, {"correction", "-p", "5", "-q", "2", "--symbolic"}}) {
        Outcome o = run(args);
        EXPECT_EQ(parsed(o).dump() + "\n", o.out);
    }
}

TEST(Cli, Determinism)
{
    std::vector<std::vector<std::string>> cmds{
        {"dualize", "-p", "2", "-q", "5", "--symbolic", "--format", "latex"},
        {"fkn", "-p", "3", "-q", "4", "--symbolic"},
        {"psdo", "--curve", "airy", "--format", "text"},
        {"normal-form", "-p", "3", "-q", "2", "--symbolic", "--fourier"},
        {"verify", "--suite", "psdo-root"},
    };
    for (const auto &c : cmds) {
        Outcome a = run(c), b = run(c);
        EXPECT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
    EXPECT_EQ(run_binary("fkn -p 2 -q 5 --symbolic").second, run_binary("fkn -p 2 -q 5 --symbolic").second);
}

TEST(Cli, VerifySuites)
{
    Outcome o = run({"verify", "--suite", "fkn-25"});
    EXPECT_EQ(o.code, 0) << o.out;
    long passes = 0;
    std::istringstream lines(o.out);
    for (std::string l; std::getline(lines, l);) {
        passes += l.rfind("pass fkn-25 t", 0) == 0;
    }
    EXPECT_EQ(passes, 7);
    EXPECT_NE(o.out.find("pass fkn-25 t6 = that6\n"), std::string::npos);
    EXPECT_NE(o.out.find("fkn-25: 7/7 matched\n"), std::string::npos);

    Json all = parsed(run({"verify", "--suite", "all", "--format", "json"}));
    EXPECT_TRUE(all.at("pass").get<bool>());
    EXPECT_EQ(all.at("suites").size(), 3u);
    EXPECT_EQ(run_binary("verify --suite fkn-25").first, 0);
}

TEST(Cli, OtherVerbs)
{
    Json c = parsed(run({"correction", "-p", "3", "-q", "2", "--times", "t3=1,t4=1,t5=1"}));
    EXPECT_EQ(c.at("value"), "1/10");
    EXPECT_TRUE(c.at("case_ii").get<bool>());
    EXPECT_FALSE(c.at("case_i").get<bool>());

    Json f = parsed(run({"fkn", "-p", "2", "-q", "3", "--symbolic"}));
    ASSERT_EQ(f.at("ahat").size(), 4u);
    EXPECT_EQ(f.at("ahat")[0], "-4/3*t4");

    Json k = parsed(run({"psdo", "--curve", "weyl-2", "--kp", "2"}));
    EXPECT_TRUE(k.at("terms").empty());

    Outcome tex = run({"normal-form", "-p", "2", "-q", "1", "--times", "t3=2/3", "--format", "latex"});
    EXPECT_EQ(tex.out, "\\frac{d}{dz} + \\left(-2 z^{2} + \\frac{1}{2} z^{-1}\\right)\n");
}
