#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the tool with stdout captured; stderr goes to a side file.
Run run(const std::string& args, const std::string& err_file = "/dev/null") {
  const std::string cmd = std::string(PTLATTICE_CLI) + " " + args + " 2>" + err_file;
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  fs::create_directories(PTLATTICE_TEST_TMP);
  return fs::path(PTLATTICE_TEST_TMP) / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

// Minimal well-formedness check: one root, every element closed in order,
// quoted attributes, no stray '<' or '&' outside entities.
bool well_formed_xml(const std::string& doc, std::string& why) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  int roots = 0;
  auto fail = [&](const std::string& msg) {
    why = msg + " at offset " + std::to_string(i);
    return false;
  };
  while (i < doc.size()) {
    if (doc[i] == '&') {
      const auto semi = doc.find(';', i);
      if (semi == std::string::npos) return fail("unterminated entity");
      const std::string ent = doc.substr(i, semi - i + 1);
      if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;")
        return fail("unknown entity " + ent);
      i = semi + 1;
      continue;
    }
    if (doc[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(doc[i])))
        return fail("text outside the root");
      ++i;
      continue;
    }
    if (doc.compare(i, 2, "<?") == 0) {
      const auto end = doc.find("?>", i);
      if (end == std::string::npos) return fail("unterminated declaration");
      i = end + 2;
      continue;
    }
    const auto end = doc.find('>', i);
    if (end == std::string::npos) return fail("unterminated tag");
    std::string tag = doc.substr(i + 1, end - i - 1);
    if (tag.find('<') != std::string::npos) return fail("'<' inside a tag");
    std::size_t quotes = 0;
    for (char c : tag) quotes += c == '"';
    if (quotes % 2) return fail("unbalanced quotes");
    if (!tag.empty() && tag[0] == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
      stack.pop_back();
    } else {
      const bool self_closing = !tag.empty() && tag.back() == '/';
      const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
      if (name.empty()) return fail("empty tag name");
      if (stack.empty()) ++roots;
      if (!self_closing) stack.push_back(name);
    }
    i = end + 1;
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  if (roots != 1) return fail("expected one root element, found " + std::to_string(roots));
  return true;
}

}  // namespace

TEST_CASE("help and version exit 0") {
  CHECK(run("--help").status == 0);
  CHECK(run("spectrum --help").status == 0);
}

TEST_CASE("usage errors exit 2 with a message") {
  const auto err = scratch("usage.err");
  CHECK(run("spectrum --n 20 --m 15 --gamma 0.1", err.string()).status == 2);
  CHECK(slurp(err).find("m <= N/2") != std::string::npos);
  CHECK(run("spectrum --n 20 --m 5 --d 11").status == 2);
  CHECK(run("spectrum --n 20 --gamma 0.1").status == 2);
  CHECK(run("spectrum --n abc --m 2").status == 2);
  CHECK(run("spectrum --n 20 --m 2 --gamma -1").status == 2);
  CHECK(run("spectrum --n 20 --m 2 --profile bogus").status == 2);
  CHECK(run("spectrum --n 4 --m 2 --profile custom").status == 2);
  CHECK(run("threshold --n 20 --d 2").status == 2);
  CHECK(run("sweep --n 20 --d \"\"").status == 2);
  CHECK(run("sweep --n 20 --d 4").status == 2);
  CHECK(run("fit-exponent --d 1 --window-lo 0.3 --window-hi 0.05").status == 2);
  CHECK(run("fit-exponent --d 1 --window-hi 1.5").status == 2);
  CHECK(run("fit-exponent --d 1 --points 5").status == 2);
  CHECK(run("verify --suite nope --seed 1").status == 2);
  CHECK(run("verify --suite oracle").status == 2);
  CHECK(run("frobnicate").status == 2);
}

TEST_CASE("spectrum CSV layout") {
  const auto r = run("spectrum --n 2 --m 1 --t0 1 --tb 1 --gamma 0.6");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0].rfind("# ptlattice ", 0) == 0);
  CHECK(ls[0].find("spectrum") != std::string::npos);
  CHECK(ls[0].find("gamma=0.6") != std::string::npos);
  CHECK(ls[1] == "index,re_E,im_E,classification,residual");
  CHECK(split(ls[2]).size() == 5);
  CHECK(split(ls[2])[3] == "real");
  CHECK(ls[4].rfind("# summary n_complex=0", 0) == 0);

  const auto broken = run("spectrum --n 20 --m 10 --gamma 1.01");
  REQUIRE(broken.status == 0);
  CHECK(broken.out.find("# summary n_complex=20 ") != std::string::npos);
}

TEST_CASE("numbers carry 12 significant digits") {
  const auto r = run("spectrum --n 5 --m 2 --gamma 0");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  bool saw_sqrt3 = false;
  for (std::size_t i = 2; i < 7; ++i) saw_sqrt3 |= split(ls[i])[1] == "1.73205080757";
  CHECK(saw_sqrt3);
}

TEST_CASE("threshold row uses the sweep columns") {
  const auto r = run("threshold --n 20 --m 10 --t0 1 --tb 0.7");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[1] == "n_sites,m,d,t0,tb,T_b,gamma_c,Gamma_c,n_complex_above,bracket_width");
  const auto cells = split(ls[2]);
  REQUIRE(cells.size() == 10);
  CHECK(std::stod(cells[6]) == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(cells[8] == "20");

  const auto alpha = run("threshold --n 20 --m 10 --profile alpha --alpha 0.5");
  REQUIRE(alpha.status == 0);
  CHECK(split(lines(alpha.out)[2])[4] == "nan");
}

TEST_CASE("custom profile from a file") {
  const auto path = scratch("profile.txt");
  {
    std::ofstream out(path);
    out << "# four bonds\n0.5\n1.5\n1.5\n0.5\n";
  }
  const auto r = run("spectrum --profile custom --profile-file " + path.string() + " --m 2 --gamma 0.3");
  REQUIRE(r.status == 0);
  CHECK(lines(r.out)[0].find("bonds=0.5;1.5;1.5;0.5") != std::string::npos);
  CHECK(lines(r.out).size() == 2 + 5 + 1);
  CHECK(run("spectrum --profile custom --profile-file " + path.string() + " --n 7 --m 2").status == 2);
}

TEST_CASE("sweep output is byte-identical across runs, with a well-formed SVG") {
  const auto csv_a = scratch("sweep_a.csv"), csv_b = scratch("sweep_b.csv");
  const auto svg_a = scratch("sweep_a.svg"), svg_b = scratch("sweep_b.svg");
  const std::string args = "sweep --n 20 --d 1,3 --tb-min 0.1 --tb-max 0.5 --points 4";
  REQUIRE(run(args + " --out " + csv_a.string() + " --svg " + svg_a.string()).status == 0);
  REQUIRE(run(args + " --out " + csv_b.string() + " --svg " + svg_b.string()).status == 0);
  CHECK(slurp(csv_a) == slurp(csv_b));
  CHECK(slurp(svg_a) == slurp(svg_b));

  const auto ls = lines(slurp(csv_a));
  REQUIRE(ls.size() == 2 + 8);
  CHECK(ls[0].rfind("# ptlattice ", 0) == 0);
  CHECK(ls[1] == "n_sites,m,d,t0,tb,T_b,gamma_c,Gamma_c,n_complex_above,bracket_width");
  for (std::size_t i = 2; i < ls.size(); ++i) CHECK(split(ls[i]).size() == 10);

  const std::string svg = slurp(svg_a);
  std::string why;
  CHECK_MESSAGE(well_formed_xml(svg, why), why);
  CHECK(svg.find("xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("spectrum output is byte-identical across runs") {
  const std::string args = "spectrum --n 33 --m 7 --t0 1 --tb 0.45 --gamma 0.2";
  const auto a = run(args), b = run(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("fit-exponent") {
  const auto r = run("fit-exponent --n 20 --d 1 --points 8");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[1] == "d,eta,stderr,window_lo,window_hi,n_points");
  const auto cells = split(ls[2]);
  CHECK(std::stod(cells[1]) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cells[5] == "8");
}

TEST_CASE("verify reports and exits 0 when every check passes") {
  const auto r = run("verify --suite oracle --seed 7");
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS ") != std::string::npos);
  CHECK(r.out.find("FAIL ") == std::string::npos);
  const auto again = run("verify --suite oracle --seed 7");
  CHECK(r.out == again.out);
}

TEST_CASE("self-check of the XML checker") {
  std::string why;
  CHECK(well_formed_xml("<a><b/></a>", why));
  CHECK_FALSE(well_formed_xml("<a><b></a>", why));
  CHECK_FALSE(well_formed_xml("<a>x & y</a>", why));
  CHECK_FALSE(well_formed_xml("<a/><b/>", why));
}
