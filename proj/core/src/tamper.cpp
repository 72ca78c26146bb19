#include "gradnorm/tamper.hpp"

#include <cmath>
#include <utility>

#include "gradnorm/errors.hpp"

namespace gradnorm {
namespace {

int last_index(const Trace& t) {
  if (t.records.size() < 3) throw InvalidArgument("tampering needs a trace with at least 3 records");
  return static_cast<int>(t.records.size()) - 1;
}

int middle(const Trace& t) { return std::max(1, last_index(t) / 2); }

// Restarting at k = 1 is a zero step, which the potentials allow.
int restart_index(const Trace& t) { return std::max(2, last_index(t) / 2); }

// Start of the OGM-G phase: 0, or the junction for fgm_then_ogmg.
int anchor(const Trace& t) { return t.method == Method::FgmThenOgmg ? t.phase_split : 0; }

template <class Eval>
void move_point(Trace& t, int k, const Vec& x, Eval&& eval) {
  StepRecord& r = t.records[k];
  r.point = x;
  eval(r);
  r.norm_sq = r.oracle.squaredNorm();
  r.v.reset();
  r.y.reset();
  r.g_acc.reset();
}

template <class Eval>
void swap_points(Trace& t, int i, int j, Eval&& eval) {
  Vec xi = t.records[i].point;
  move_point(t, i, t.records[j].point, eval);
  move_point(t, j, xi, eval);
}

// Latest index <= middle whose recorded oracle is nonzero and differs from its
// predecessor, so scaling or repeating it is visible once a run hits u* exactly.
int visible_index(const Trace& t) {
  for (int k = middle(t); k > 1; --k) {
    const Vec& g = t.records[k].oracle;
    if (g.squaredNorm() > 0.0 && g != t.records[k - 1].oracle) return k;
  }
  return 1;
}

void corrupt_oracle(Trace& t) {
  StepRecord& r = t.records[visible_index(t)];
  r.oracle *= 0.5;
  r.norm_sq = r.oracle.squaredNorm();
}

}  // namespace

std::vector<std::string> tamperings_for(Method m) {
  switch (m) {
    case Method::GD:
    case Method::FGM:
      return {"ascent_step", "restart", "swap", "corrupt_oracle", "corrupt_value"};
    case Method::OGMG:
    case Method::FgmThenOgmg:
      return {"terminal_ascent", "terminal_restart", "swap_terminal", "corrupt_oracle",
              "corrupt_value"};
    case Method::GDA:
    case Method::KM:
    case Method::Halpern:
      return {"ascent_step", "restart", "swap", "corrupt_oracle", "stale_oracle"};
  }
  return {};
}

Trace tamper(const Trace& t, const SmoothProblem& p, const std::string& name) {
  Trace out = t;
  const int n = last_index(out);
  const int mid = middle(out);
  const double L = p.L();
  auto eval = [&](StepRecord& r) {
    r.oracle = p.gradient(r.point);
    r.value = p.value(r.point);
  };
  const int a = anchor(out);
  const Vec& x0 = t.records[0].point;
  const Vec& g0 = t.records[0].oracle;

  if (name == "ascent_step") {
    move_point(out, 1, x0 + g0 / L, eval);
  } else if (name == "restart") {
    move_point(out, restart_index(out), x0, eval);
  } else if (name == "swap") {
    swap_points(out, 1, 2, eval);
  } else if (name == "terminal_ascent") {
    move_point(out, n, t.records[a].point + t.records[a].oracle / L, eval);
  } else if (name == "terminal_restart") {
    move_point(out, n, t.records[a].point, eval);
  } else if (name == "swap_terminal") {
    swap_points(out, a, n, eval);
  } else if (name == "corrupt_oracle") {
    corrupt_oracle(out);
  } else if (name == "corrupt_value") {
    StepRecord& r = out.records[mid];
    const double f = r.value ? *r.value : p.value(r.point);
    r.value = f - (1.0 + std::abs(f));
  } else {
    throw InvalidArgument("unknown tampering '" + name + "' for a smooth trace");
  }
  return out;
}

Trace tamper(const Trace& t, const OperatorProblem& p, const std::string& name) {
  Trace out = t;
  last_index(out);
  const double L = p.L();
  auto eval = [&](StepRecord& r) { r.oracle = p.apply(r.point); };
  const Vec& u0 = t.records[0].point;

  if (name == "ascent_step") {
    move_point(out, 1, u0 + t.records[0].oracle / L, eval);
  } else if (name == "restart") {
    move_point(out, restart_index(out), u0, eval);
  } else if (name == "swap") {
    swap_points(out, 1, 2, eval);
  } else if (name == "corrupt_oracle") {
    corrupt_oracle(out);
  } else if (name == "stale_oracle") {
    const int k = visible_index(out);
    StepRecord& r = out.records[k];
    r.oracle = out.records[k - 1].oracle;
    r.norm_sq = r.oracle.squaredNorm();
  } else {
    throw InvalidArgument("unknown tampering '" + name + "' for an operator trace");
  }
  return out;
}

}  // namespace gradnorm
