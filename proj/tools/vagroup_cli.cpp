// vagroup: command-line front end to the V / A / VA element library.
//
// Exit status: 0 success, 1 domain or usage error, 2 resource limit.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "vagroup/vagroup.hpp"

namespace {

using namespace vagroup;

constexpr const char* kTsvHelp = R"(distortion TSV columns:
  k            exponent
  sing_bound   |Sing(f^k)| / max generator |Sing|
  slope_bound  max |log2 slope| of f^k / max generator |log2 slope|
  lower_bound  max of the two; a lower bound for the word length of f^k
  ratio        lower_bound / k
  certified    what the certificate alone guarantees for f^k
  ratio_dec    ratio as a decimal (only with --decimal)
Lines starting with '#' carry the certificate and its constant. Word length is
symmetric (l(f) = l(f^-1)), so only positive k are tabulated.)";

struct Options {
  std::vector<std::string> elements;
  std::int64_t k = 1;
  std::size_t radius = 2;
  std::optional<std::uint64_t> seed;
  std::size_t depth = 8;
  std::vector<std::string> points;
  std::string out;
  std::string ball;
  std::string genset;
  bool decimal = false;
  Bounds bounds;
};

std::string decimal_text(const Rat& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << r.to_double();
  return os.str();
}

VAElement element(const Options& o, std::size_t i = 0) {
  if (o.elements.size() <= i) {
    throw DomainError("missing --element");
  }
  return as_va(resolve_element(o.elements[i]));
}

GenSet genset(const Options& o) {
  if (o.genset.empty()) {
    return default_genset();
  }
  std::vector<Generator> base;
  for (auto& [name, e] : load_element_file(o.genset)) {
    base.push_back({name, as_va(e)});
  }
  return GenSet(base);
}

std::vector<CantorPoint> points(const Options& o) {
  if (o.points.empty()) {
    throw DomainError("missing --point");
  }
  std::vector<CantorPoint> out;
  for (const auto& p : o.points) {
    out.push_back(parse_point(p));
  }
  return out;
}

void print_orbit(const OrbitResult& r) {
  if (r.periodic()) {
    std::cout << "periodic preperiod=" << r.cycle().preperiod
              << " period=" << r.cycle().period << "\n";
  } else {
    const auto& u = std::get<Unresolved>(r.classification);
    std::cout << "unresolved after " << u.steps << " steps (trend " << u.trend << ")\n";
  }
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    std::cout << i << "\t" << r.trace[i] << "\n";
  }
}

void print_partition(const OrbitPartition& p) {
  for (std::size_t i = 0; i < p.classes.size(); ++i) {
    const auto& c = p.classes[i];
    std::cout << "orbit " << i;
    if (c.period) {
      std::cout << " period=" << *c.period;
    }
    std::cout << ":";
    for (const auto& [pt, shift] : c.members) {
      std::cout << " " << pt << "@" << shift;
    }
    std::cout << "\n";
  }
  for (const auto& [a, b] : p.unresolved_pairs) {
    std::cout << "unresolved " << a << " " << b << "\n";
  }
}

std::string order_text(const VAElement& f, const Bounds& b) {
  if (va_singularities(f).empty()) {
    OrderResult r = tp_order(tp_from_plmap(*to_plmap(f)), b.n_max);
    if (const auto* fin = std::get_if<FiniteOrder>(&r)) {
      return "finite " + std::to_string(fin->n);
    }
    if (const auto* inf = std::get_if<InfiniteCertified>(&r)) {
      return "infinite " + describe(OrderCertificate{HigmanLeaf{inf->witness}});
    }
    return "unknown (searched powers up to " +
           std::to_string(std::get<OrderUnknown>(r).n_max) + ")";
  }
  IntoVResult r = conjugate_into_v(f, b);
  if (const auto* v = std::get_if<IntoV>(&r)) {
    return order_text(v->v, b) + " (conjugate into V)";
  }
  if (const auto* n = std::get_if<NotFiniteOrder>(&r)) {
    return "infinite " + describe(n->certificate);
  }
  return "unknown (" + std::get<IntoVUnknown>(r).reason + ")";
}

void run_reduce(const Options& o) {
  ReductionReport rep = reduce_orbits(element(o), o.bounds);
  for (const auto& s : rep.steps) {
    std::cout << "step orbit=" << s.orbit << " removed=" << s.removed;
    if (s.previous) {
      std::cout << " previous=" << *s.previous << " " << fate_name(s.fate);
    }
    std::cout << " span " << s.span_before << "->" << s.span_after << "\n";
  }
  if (rep.partial) {
    std::cout << "partial: " << rep.unresolved_pairs.size()
              << " singularity pairs with unknown orbit relation\n";
  }
  std::cout << "conjugator " << to_string(rep.conjugator) << "\n";
  std::cout << "result " << to_string(rep.result) << "\n";
  std::cout << "sing " << to_string(va_singularities(rep.result)) << "\n";
}

void run_into_v(const Options& o) {
  IntoVResult r = conjugate_into_v(element(o), o.bounds);
  if (const auto* v = std::get_if<IntoV>(&r)) {
    std::cout << "into-v\nconjugator " << to_string(v->conjugator) << "\nv "
              << to_string(v->v) << "\n";
    if (auto pl = to_plmap(v->v)) {
      std::cout << "tp " << to_string(tp_from_plmap(*pl)) << "\n";
    }
  } else if (const auto* n = std::get_if<NotFiniteOrder>(&r)) {
    std::cout << "not-finite-order " << describe(n->certificate) << "\nconjugator "
              << to_string(n->conjugator) << "\n";
  } else {
    std::cout << "unknown " << std::get<IntoVUnknown>(r).reason << "\n";
  }
}

void run_certify(const Options& o) {
  VAElement f = element(o);
  GenSet s = genset(o);
  OrderCertificate c = infinite_order_certificate(f, o.bounds);
  LengthLowerBound lb = word_length_lower_bound(f, s.stats());
  std::cout << "certificate " << describe(c) << "\n";
  std::cout << "sing_bound " << lb.sing_bound << "\nslope_bound " << lb.slope_bound
            << "\nlower_bound " << lb.value << "\n";
}

void run_distortion(const Options& o) {
  if (o.k <= 0) {
    throw DomainError("--k must be positive");
  }
  GenSet s = genset(o);
  DistortionTable t =
      distortion_table(element(o), static_cast<std::size_t>(o.k), s.stats(), o.bounds);
  std::cout << "# certificate\t" << describe(t.certificate) << "\n";
  std::cout << "# constant\t" << t.constant << "\t(for k divisible by " << t.period
            << ")\n";
  std::cout << "k\tsing_bound\tslope_bound\tlower_bound\tratio\tcertified";
  std::cout << (o.decimal ? "\tratio_dec\n" : "\n");
  for (const auto& r : t.rows) {
    std::cout << r.k << "\t" << r.sing_bound << "\t" << r.slope_bound << "\t"
              << r.lower_bound << "\t" << r.ratio << "\t" << r.certified;
    if (o.decimal) {
      std::cout << "\t" << decimal_text(r.ratio);
    }
    std::cout << "\n";
  }
}

void run_ball_build(const Options& o) {
  if (o.out.empty()) {
    throw DomainError("ball build needs --out");
  }
  BallLimits lim;
  lim.piece_budget = o.bounds.piece_budget;
  Ball b = bfs_ball(genset(o), o.radius, lim);
  save_ball(o.out, b);
  std::cout << "radius " << b.radius << " elements " << b.length.size() << "\n";
}

void run_ball_query(const Options& o) {
  if (o.ball.empty()) {
    throw DomainError("ball query needs --ball");
  }
  Ball b = load_ball(o.ball);
  if (o.elements.empty()) {
    throw DomainError("missing --element");
  }
  for (std::size_t i = 0; i < o.elements.size(); ++i) {
    auto len = exact_length(element(o, i), b);
    std::cout << o.elements[i] << "\t"
              << (len ? std::to_string(*len) : "not-in-ball (radius " +
                                                   std::to_string(b.radius) + ")")
              << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Exact computations in Thompson's group V, Brin's group A and VA."};
  app.footer(kTsvHelp);
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);

  app.add_option("--n-max", o.bounds.n_max, "largest power tried in order searches")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-steps", o.bounds.max_steps, "orbit iteration limit")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-bits", o.bounds.max_bits, "largest coordinate size in an orbit")
      ->check(CLI::PositiveNumber);
  app.add_option("--piece-budget", o.bounds.piece_budget,
                 "largest element size before a resource stop")
      ->check(CLI::PositiveNumber);
  app.add_option("--growth-horizon", o.bounds.growth_horizon,
                 "powers checked for singular growth")
      ->check(CLI::PositiveNumber);
  app.add_option("--genset", o.genset, "element file of named generators");
  app.add_flag("--decimal", o.decimal, "add decimal columns (display only)");

  auto with_element = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("-e,--element", o.elements,
                                "fixture name, inline element, PATH or PATH:NAME");
    if (required) {
      opt->required();
    }
    sub->fallthrough();
    return sub;
  };

  auto* compose = with_element(app.add_subcommand("compose", "product e1.e2... (e1 first)"));
  auto* inv = with_element(app.add_subcommand("inv", "inverse"));
  auto* pow = with_element(app.add_subcommand("pow", "power e^k"));
  pow->add_option("--k", o.k, "exponent (may be negative)");
  auto* eval = with_element(app.add_subcommand("eval", "evaluate at Cantor points"));
  eval->add_option("--point", o.points, "p+, p- or a/b")->required();
  auto* sing = with_element(app.add_subcommand("sing", "singularity set"));
  auto* orbit = with_element(app.add_subcommand("orbit", "forward orbit of a point"));
  orbit->add_option("--point", o.points, "p+, p- or a/b")->required();
  auto* orbits = with_element(app.add_subcommand("orbits", "orbit classes of Sing"));
  auto* reduce = with_element(app.add_subcommand("reduce", "one singularity per orbit"));
  auto* into_v = with_element(app.add_subcommand("into-v", "conjugate into V"));
  auto* order = with_element(app.add_subcommand("order", "order of the element"));
  auto* certify = with_element(app.add_subcommand("certify", "infinite-order certificate"));
  auto* distortion = with_element(app.add_subcommand("distortion", "lower-bound table"));
  distortion->add_option("--k", o.k, "largest exponent K")->required();

  auto* ball = app.add_subcommand("ball", "Cayley ball of the generating set");
  ball->require_subcommand(1);
  ball->fallthrough();
  auto* build = ball->add_subcommand("build", "enumerate and save a ball");
  build->add_option("--radius", o.radius, "ball radius");
  build->add_option("--out", o.out, "output file")->required();
  build->fallthrough();
  auto* query = with_element(ball->add_subcommand("query", "exact word length"));
  query->add_option("--ball", o.ball, "ball file")->required();

  auto* random = app.add_subcommand("random", "seeded random word in the generators");
  random->add_option("--seed", o.seed, "seed (mandatory)")->required();
  random->add_option("--depth", o.depth, "word length");
  random->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (compose->parsed()) {
      VAElement r;
      for (std::size_t i = 0; i < o.elements.size(); ++i) {
        r = va_compose(r, element(o, i), o.bounds.piece_budget);
      }
      std::cout << to_string(r) << "\n";
    } else if (inv->parsed()) {
      std::cout << to_string(va_invert(element(o))) << "\n";
    } else if (pow->parsed()) {
      std::cout << to_string(va_power(element(o), o.k, o.bounds.piece_budget)) << "\n";
    } else if (eval->parsed()) {
      VAElement f = element(o);
      for (const auto& x : points(o)) {
        std::cout << x << "\t" << va_eval(f, x) << "\n";
      }
    } else if (sing->parsed()) {
      std::cout << to_string(va_singularities(element(o))) << "\n";
    } else if (orbit->parsed()) {
      print_orbit(orbit_trace(element(o), points(o).front(), o.bounds));
    } else if (orbits->parsed()) {
      print_partition(sing_orbit_partition(element(o), o.bounds));
    } else if (reduce->parsed()) {
      run_reduce(o);
    } else if (into_v->parsed()) {
      run_into_v(o);
    } else if (order->parsed()) {
      std::cout << order_text(element(o), o.bounds) << "\n";
    } else if (certify->parsed()) {
      run_certify(o);
    } else if (distortion->parsed()) {
      run_distortion(o);
    } else if (build->parsed()) {
      run_ball_build(o);
    } else if (query->parsed()) {
      run_ball_query(o);
    } else if (random->parsed()) {
      std::cout << to_string(random_word(genset(o), *o.seed, o.depth,
                                         o.bounds.piece_budget))
                << "\n";
    }
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
