#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "support/tempdir.hpp"

#ifndef VSSE_CLI_PATH
#error "VSSE_CLI_PATH must point at the vsse executable"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run vsse(const std::string& args) {
  const std::string cmd = std::string(VSSE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

const char* kId1 = "00000000000000000000000000000001";
const char* kId2 = "00000000000000000000000000000002";
const char* kId3 = "00000000000000000000000000000003";

}  // namespace

TEST_CASE("cli: keygen, build, search, update, exit codes") {
  testing::TempDir tmp;
  const auto store = tmp.path() / "s";
  const auto corpus = tmp.path() / "corpus.tsv";
  {
    std::ofstream c(corpus);
    c << "apple\t" << kId1 << "," << kId2 << "\n"
      << "pear\t" << kId2 << "\n";
  }

  CHECK(vsse("keygen " + q(store)).code == 0);
  CHECK(vsse("keygen " + q(store)).code == 1);
  CHECK(vsse("keygen --force " + q(store)).code == 0);
  CHECK(vsse("build " + q(store) + " " + q(corpus)).code == 0);

  Run r = vsse("search " + q(store) + " apple");
  CHECK(r.code == 0);
  CHECK(r.out == std::string(kId1) + "\n" + kId2 + "\nACCEPT\n");
  CHECK(vsse("search " + q(store) + " apple --scheme static").out == r.out);

  r = vsse("search " + q(store) + " apple --adversary FLIP_ID_BIT");
  CHECK(r.code == 2);
  CHECK(r.out == "REJECT pairing-fail\n");

  r = vsse("search " + q(store) + " unknown");
  CHECK(r.code == 0);
  CHECK(r.out == "ACCEPT\n");

  CHECK(vsse("add " + q(store) + " " + kId3 + " apple").code == 0);
  CHECK(vsse("search " + q(store) + " apple").out ==
        std::string(kId1) + "\n" + kId2 + "\n" + kId3 + "\nACCEPT\n");
  CHECK(vsse("del " + q(store) + " " + kId1 + " apple").code == 0);
  for (const char* scheme : {"forward", "static"}) {
    r = vsse("search " + q(store) + " apple --scheme " + scheme);
    CHECK(r.code == 0);
    CHECK(r.out == std::string(kId2) + "\n" + kId3 + "\nACCEPT\n");
  }
  CHECK(vsse("del " + q(store) + " " + kId1 + " apple").code == 1);
  CHECK(vsse("del " + q(store) + " " + kId1 + " pear").code == 1);

  r = vsse("soundness " + q(store) + " --trials 3 --seed 5");
  CHECK(r.code == 0);
  CHECK(r.out.find("FORGE_PROOF:") != std::string::npos);
}

TEST_CASE("cli: usage and corruption exit codes") {
  testing::TempDir tmp;
  const auto store = tmp.path() / "s";
  CHECK(vsse("").code == 1);
  CHECK(vsse("frobnicate").code == 1);
  CHECK(vsse("search " + q(tmp.path() / "nope") + " w").code == 1);
  CHECK(vsse("keygen " + q(store)).code == 0);
  CHECK(vsse("search " + q(store) + " w --scheme other").code == 1);
  CHECK(vsse("search " + q(store) + " w --adversary NOPE").code == 1);

  const auto bad = tmp.path() / "bad.tsv";
  {
    std::ofstream c(bad);
    c << "ok\t" << kId1 << "\nbroken line\n";
  }
  CHECK(vsse("build " + q(store) + " " + q(bad)).code == 1);

  { std::ofstream(store / "cloud" / "index.bin") << "junk"; }
  CHECK(vsse("search " + q(store) + " w").code == 3);
}

TEST_CASE("cli: bench prints one row per size with a constant proof size") {
  Run r = vsse("bench --sizes 1,10 --reps 5 --seed 3");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("result_size\t", 0) == 0);
  CHECK(r.out.find("\n1\t") != std::string::npos);
  CHECK(r.out.find("\n10\t") != std::string::npos);
  CHECK(vsse("bench --reps 4").code == 1);
  CHECK(vsse("bench --sizes 0").code == 1);
}
