// linkhom: link-homotopy decisions over canonical coordinates.
//
// Exit status: 0 when the command ran and answered, 2 on input errors,
// 3 on internal errors.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "linkhom/decide.hpp"
#include "linkhom/errors.hpp"
#include "linkhom/io.hpp"
#include "linkhom/milnor.hpp"
#include "linkhom/stringlink.hpp"

using namespace linkhom;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kInputError = 2;
constexpr int kInternalError = 3;

std::string slurp(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CanonicalForm load(const std::string& path) {
  try {
    return parse_canonical(slurp(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<IndexSequence> table_indices(int n) {
  if (n == 2) return {IndexSequence{1, 2}};
  return comparison_indices(n);
}

struct Args {
  std::string left, right, cert, file;
  bool certificate = false;
  bool verify = false;
  bool verbose = false;
  bool roundtrip = false;
  int jobs = 1;
};

DecideOptions options_of(const Args& a) {
  DecideOptions o;
  o.verify = a.verify;
  if (a.verbose) o.log = [](std::string_view line) { std::cerr << line << '\n'; };
  return o;
}

int cmd_decide(const Args& a) {
  const auto y = load(a.left);
  const auto yp = load(a.right);
  const auto v = decide(y, yp, options_of(a));
  std::cout << verdict_json(v, a.certificate) << '\n';
  return 0;
}

int cmd_mu(const Args& a) {
  const auto y = load(a.left);
  if (a.right.empty()) {
    std::cout << mu_table_json(y.n(), mubar_all(from_canonical(y), table_indices(y.n()))) << '\n';
  } else {
    std::cout << mu_report_json(mu_compare(y, load(a.right))) << '\n';
  }
  return 0;
}

int cmd_canonical(const Args& a) {
  const auto y = load(a.left);
  Json j = Json::parse(canonical_json(y));
  j["coordinates"] = coordinate_count(y.n());
  if (a.roundtrip) {
    if (to_canonical(from_canonical(y)) != y) throw InvariantError("roundtrip changed the coordinates");
    j["roundtrip"] = "ok";
  }
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_verify(const Args& a) {
  const auto y = load(a.left);
  const auto yp = load(a.right);
  if (y.n() != yp.n()) throw InputError("component counts differ");
  std::vector<PartialConj> c;
  try {
    c = parse_certificate(slurp(a.cert));
    for (const auto& m : c) validate(m, y.n());
  } catch (const InputError& e) {
    throw InputError(a.cert + ": " + e.what());
  }
  std::cout << Json{{"valid", verify_certificate(y, yp, c)}, {"moves", c.size()}}.dump() << '\n';
  return 0;
}

int cmd_batch(const Args& a) {
  std::vector<std::pair<CanonicalForm, CanonicalForm>> pairs;
  try {
    pairs = parse_pairs(slurp(a.file));
  } catch (const InputError& e) {
    throw InputError(a.file + ": " + e.what());
  }
  const auto results = decide_batch(pairs, a.jobs, options_of(a));
  std::cout << batch_json(results, a.certificate) << '\n';
  int code = 0;
  for (const auto& r : results) code = std::max(code, r.error_code);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-homotopy of string links in canonical coordinates"};
  app.require_subcommand(1);
  Args a;

  auto* dec = app.add_subcommand("decide", "Decide whether two links are link-homotopic");
  dec->add_option("left", a.left, "first link (JSON)")->required();
  dec->add_option("right", a.right, "second link (JSON)")->required();
  dec->add_flag("--certificate", a.certificate, "include the move list");
  dec->add_flag("--verify", a.verify, "re-check the certificate before printing");
  dec->add_flag("-v,--verbose", a.verbose, "stage log on stderr");

  auto* mu = app.add_subcommand("mu", "Milnor invariants over the distinguishing indices");
  mu->add_option("link", a.left, "link (JSON)")->required();
  mu->add_option("other", a.right, "compare against a second link");

  auto* can = app.add_subcommand("canonical", "Normalize a canonical form");
  can->add_option("link", a.left, "link (JSON)")->required();
  can->add_flag("--roundtrip", a.roundtrip, "check to_canonical(from_canonical(Y)) = Y");

  auto* ver = app.add_subcommand("verify", "Check a certificate");
  ver->add_option("left", a.left, "first link (JSON)")->required();
  ver->add_option("right", a.right, "second link (JSON)")->required();
  ver->add_option("certificate", a.cert, "move list or verdict (JSON)")->required();

  auto* bat = app.add_subcommand("batch", "Decide a list of pairs");
  bat->add_option("file", a.file, "list of {left, right} pairs (JSON)")->required();
  bat->add_option("-j,--jobs", a.jobs, "worker threads")->check(CLI::Range(1, 256));
  bat->add_flag("--certificate", a.certificate, "include move lists");
  bat->add_flag("-v,--verbose", a.verbose, "stage logs on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInputError;
  }

  try {
    if (*dec) return cmd_decide(a);
    if (*mu) return cmd_mu(a);
    if (*can) return cmd_canonical(a);
    if (*ver) return cmd_verify(a);
    return cmd_batch(a);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}
