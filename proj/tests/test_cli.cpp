#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#ifndef HENON_CLI_PATH
#error "HENON_CLI_PATH must point at the henon executable"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(HENON_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
    res.output.append(buf.data(), n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("no-such-command").exit_code == 2);
  CHECK(run("continue --word +-").exit_code == 2);             // missing params
  CHECK(run("continue --a 10 --word +-").exit_code == 2);      // --a needs --b
  CHECK(run("continue --a 10 --b 0.3 --eps 0.1 --r 0.0 --word +-").exit_code == 2);
  CHECK(run("continue --a -1 --b 0.3 --word +-").exit_code == 2);
  CHECK(run("scan --window 0 1 0 1 --grid 4 4").exit_code == 2);  // missing --out
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("cli: classify-quadratic") {
  const RunResult esc = run("classify-quadratic --a 3");
  CHECK(esc.exit_code == 0);
  CHECK(esc.output.find("escape") == 0);

  const RunResult att = run("classify-quadratic --a 0.5");
  CHECK(att.exit_code == 0);
  CHECK(att.output.find("attracting-cycle period=1") == 0);

  const RunResult six = run("classify-quadratic --a 1.77");
  CHECK(six.exit_code == 0);
  CHECK(six.output.find("attracting-cycle period=6") == 0);

  // A tiny budget cannot resolve the slow attractor: undecided, exit 1.
  const RunResult und = run("classify-quadratic --a 1.999 --max-iter 30");
  CHECK(und.exit_code == 1);
  CHECK(und.output.find("undecided") == 0);
}

TEST_CASE("cli: continue writes a verifiable orbit record") {
  const std::string path = "/tmp/henonai_cli_orbit.json";
  const RunResult cont =
      run("continue --a 10 --b 0.3 --word ++- --out " + path);
  CHECK(cont.exit_code == 0);
  CHECK(cont.output.find("\"word\": \"++-\"") != std::string::npos);
  CHECK(cont.output.find("\"converged\": true") != std::string::npos);

  const RunResult ver = run("verify --orbit-file " + path);
  CHECK(ver.exit_code == 0);
  CHECK(ver.output.find("residual: ok") != std::string::npos);
  CHECK(ver.output.find("monodromy_det: ok") != std::string::npos);
  CHECK(ver.output.find("shift_equivariance: ok") != std::string::npos);

  // Corrupting one orbit entry must flip verification to failure.
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  in.close();
  const auto pos = text.find("\"orbit\": [");
  REQUIRE(pos != std::string::npos);
  text.replace(pos + 10, 0, "9.9, ");
  const auto del = text.find(",", pos + 15);
  // Keep the length consistent: drop the entry after the injected one.
  std::string broken = text.substr(0, pos + 15) + text.substr(del + 1);
  std::ofstream out(path);
  out << broken;
  out.close();
  const RunResult bad = run("verify --orbit-file " + path);
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("residual: FAIL") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("cli: continue via eps/r and the contraction solver") {
  const RunResult a = run("continue --eps 0.31622776601683794 --r "
                          "0.09486832980505137 --word +-");
  CHECK(a.exit_code == 0);
  const RunResult b =
      run("continue --a 10 --b 0.3 --word +- --solver contraction");
  CHECK(b.exit_code == 0);

  // Far outside the contraction regime the frozen preconditioner diverges.
  const RunResult fail =
      run("continue --a 1.2 --b 0.3 --word ++-+-- --solver contraction");
  CHECK(fail.exit_code == 1);
  CHECK(fail.output.find("no convergence") != std::string::npos);
}

TEST_CASE("cli: continue from a q-backbone anchor") {
  // r_hat = 1/sqrt(3); the repelling fixed point of Q_3.
  const RunResult res =
      run("continue --a 400 --b 11.547005383792516 "
          "--rhat 0.57735026918962584 --q-point 0.7521578651382534 --period 1");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("q_anchor") != std::string::npos);
  CHECK(res.output.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("cli: orbits summary line") {
  const RunResult res = run("orbits --a 10 --b 0.3 --period 4");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("converged 16/16") == 0);
  CHECK(res.output.find("min_separation=") != std::string::npos);
}

TEST_CASE("cli: entropy CSV on stdout") {
  const RunResult hen = run("entropy --a 10 --b 0.3 --max-period 4");
  CHECK(hen.exit_code == 0);
  CHECK(hen.output.find("n,count,h_n,failed") == 0);
  CHECK(hen.output.find("4,16,") != std::string::npos);
  CHECK(hen.output.find("estimate,maxrow,0.69314718") != std::string::npos);

  const RunResult quad = run("entropy --quadratic-a 1.77 --max-period 6");
  CHECK(quad.exit_code == 0);
  CHECK(quad.output.find("6,22,") != std::string::npos);
}

TEST_CASE("cli: transform forward and inverse") {
  const RunResult fwd = run("transform --chart sphere --a 0 --b 0");
  CHECK(fwd.exit_code == 0);
  CHECK(fwd.output == "0 0 -1\n");

  const RunResult inv = run("transform --chart epsr --inverse 0.5 0.25");
  CHECK(inv.exit_code == 0);
  CHECK(inv.output == "4 0.5\n");

  const RunResult dom = run("transform --chart mobius --inverse 2 0");
  CHECK(dom.exit_code == 1);
  CHECK(dom.output.find("error:") != std::string::npos);
}

TEST_CASE("cli: scan emits csv and pgm") {
  const std::string base = "/tmp/henonai_cli_scan";
  const RunResult res = run("scan --chart epsr --window 0 0.2 0 0.2 --grid 3 3 "
                            "--m 2 --out " + base + " --overlays");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("cells=9 full=9") == 0);

  std::ifstream csv(base + ".csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "i,j,a,b,class,converged,of,sterling_meiss,improved_horseshoe,dn_radius");

  std::ifstream pgm(base + ".pgm", std::ios::binary);
  REQUIRE(pgm.good());
  std::string magic;
  pgm >> magic;
  CHECK(magic == "P5");

  std::ifstream over(base + "_overlay_bplus.csv");
  CHECK(over.good());

  for (const char* suffix : {".csv", ".pgm", "_overlay_bplus.csv",
                             "_overlay_bminus.csv"})
    std::remove((base + suffix).c_str());
}
