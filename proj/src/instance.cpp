#include "mdvrp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "mdvrp/rng.hpp"

namespace mdvrp {

namespace {

constexpr double kSymmetryTol = 1e-9;

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::invalid_argument("parse error at line " + std::to_string(line) +
                              ": " + what);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

double Instance::depot_distance(int v) const {
  double best = std::numeric_limits<double>::infinity();
  for (int r = depot_begin(); r < depot_end(); ++r) best = std::min(best, cost(v, r));
  return best;
}

int Instance::nearest_depot(int v) const {
  int arg = depot_begin();
  double best = cost(v, arg);
  for (int r = depot_begin() + 1; r < depot_end(); ++r) {
    if (cost(v, r) < best) {
      best = cost(v, r);
      arg = r;
    }
  }
  return arg;
}

double Instance::ell_sum(const std::vector<int>& clients) const {
  double s = 0;
  for (int v : clients) s += ell(v);
  return s;
}

void Instance::validate() const {
  const int N = num_nodes();
  if (n_clients < 1 || n_depots < 1) throw std::invalid_argument("empty instance");
  if (k < 1) throw std::invalid_argument("capacity k must be positive");
  if (cost.rows() != N || cost.cols() != N) throw std::invalid_argument("cost size");
  for (int i = 0; i < N; ++i) {
    if (cost(i, i) != 0.0) throw std::invalid_argument("nonzero diagonal");
    for (int j = 0; j < N; ++j) {
      if (cost(i, j) < 0) throw std::invalid_argument("negative cost");
      if (std::abs(cost(i, j) - cost(j, i)) > kSymmetryTol)
        throw std::invalid_argument("asymmetric cost");
    }
  }
  // Triangle inequality, allowing for closure round-off.
  const double tol = 1e-9 * std::max(1.0, diameter());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l)
        if (cost(i, j) > cost(i, l) + cost(l, j) + tol)
          throw std::invalid_argument("triangle inequality violated");
}

double tour_cost(const Instance& inst, const Tour& t) {
  if (t.clients.empty()) return 0.0;
  double s = inst.c(t.depot, t.clients.front());
  for (std::size_t i = 0; i + 1 < t.clients.size(); ++i)
    s += inst.c(t.clients[i], t.clients[i + 1]);
  s += inst.c(t.clients.back(), t.depot);
  return s;
}

double solution_cost(const Instance& inst, const Solution& s) {
  double total = 0;
  for (const Tour& t : s.tours) {
    if (t.depot < inst.depot_begin() || t.depot >= inst.depot_end())
      throw std::invalid_argument("tour root is not a depot");
    for (int v : t.clients)
      if (v < 0 || v >= inst.n_clients)
        throw std::invalid_argument("unknown client in tour");
    total += tour_cost(inst, t);
  }
  return total;
}

double radial_lb(const Instance& inst) {
  double s = 0;
  for (int v = 0; v < inst.n_clients; ++v) s += inst.depot_distance(v);
  return 2.0 / inst.k * s;
}

Eigen::MatrixXd metric_closure(const Eigen::MatrixXd& raw) {
  const int N = static_cast<int>(raw.rows());
  if (raw.cols() != N) throw std::invalid_argument("cost matrix not square");
  for (int i = 0; i < N; ++i) {
    if (raw(i, i) != 0.0) throw std::invalid_argument("nonzero diagonal");
    for (int j = 0; j < N; ++j) {
      if (raw(i, j) < 0) throw std::invalid_argument("negative cost");
      if (std::abs(raw(i, j) - raw(j, i)) > kSymmetryTol)
        throw std::invalid_argument("asymmetric cost");
    }
  }
  Eigen::MatrixXd d = raw;
  for (int l = 0; l < N; ++l)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        d(i, j) = std::min(d(i, j), d(i, l) + d(l, j));
  return d;
}

Instance parse_instance(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
  }
  int ln = 0;  // 1-based line of the last token read
  std::size_t pos = 0;
  auto next_tokens = [&]() -> std::vector<std::string> {
    while (pos < lines.size()) {
      ++ln;
      std::string l = lines[pos++];
      auto hash = l.find('#');
      if (hash != std::string::npos) l = l.substr(0, hash);
      std::istringstream ls(l);
      std::vector<std::string> toks;
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (!toks.empty()) return toks;
    }
    parse_fail(ln + 1, "unexpected end of file");
  };

  auto toks = next_tokens();
  if (toks.size() != 2 || toks[0] != "mdvrp" || toks[1] != "1")
    parse_fail(ln, "expected header 'mdvrp 1'");

  toks = next_tokens();
  if (toks.size() != 2 || toks[0] != "k") parse_fail(ln, "expected 'k <int>'");
  int k = 0;
  try {
    k = std::stoi(toks[1]);
  } catch (...) {
    parse_fail(ln, "capacity is not an integer");
  }
  if (k < 1) parse_fail(ln, "capacity k must be at least 1");

  toks = next_tokens();
  if (toks.size() != 2 || toks[0] != "mode" || (toks[1] != "coords" && toks[1] != "matrix"))
    parse_fail(ln, "expected 'mode <coords|matrix>'");
  const bool coords_mode = toks[1] == "coords";

  toks = next_tokens();
  if (toks.size() != 2 || toks[0] != "depots") parse_fail(ln, "expected 'depots <m>'");
  const int m = std::stoi(toks[1]);
  if (m < 1) parse_fail(ln, "need at least one depot");

  struct Node {
    std::string id;
    double x = 0, y = 0;
  };
  std::set<std::string> seen;
  auto read_node = [&](Node& nd) {
    auto t = next_tokens();
    if (coords_mode ? t.size() != 3 : t.size() != 1)
      parse_fail(ln, coords_mode ? "expected '<id> <x> <y>'" : "expected '<id>'");
    nd.id = t[0];
    if (!seen.insert(nd.id).second) parse_fail(ln, "duplicate identifier '" + nd.id + "'");
    if (coords_mode) {
      try {
        nd.x = std::stod(t[1]);
        nd.y = std::stod(t[2]);
      } catch (...) {
        parse_fail(ln, "bad coordinate");
      }
    }
  };

  std::vector<Node> depots(m);
  for (auto& nd : depots) read_node(nd);

  toks = next_tokens();
  if (toks.size() != 2 || toks[0] != "clients") parse_fail(ln, "expected 'clients <n>'");
  const int n = std::stoi(toks[1]);
  if (n < 1) parse_fail(ln, "need at least one client");
  std::vector<Node> clients(n);
  for (auto& nd : clients) read_node(nd);

  Instance inst;
  inst.n_clients = n;
  inst.n_depots = m;
  inst.k = k;
  inst.names.reserve(n + m);
  for (const auto& nd : clients) inst.names.push_back(nd.id);
  for (const auto& nd : depots) inst.names.push_back(nd.id);

  if (coords_mode) {
    Eigen::MatrixX2d xy(n + m, 2);
    for (int i = 0; i < n; ++i) xy.row(i) << clients[i].x, clients[i].y;
    for (int j = 0; j < m; ++j) xy.row(n + j) << depots[j].x, depots[j].y;
    inst.coords = xy;
    Eigen::MatrixXd d(n + m, n + m);
    for (int i = 0; i < n + m; ++i)
      for (int j = 0; j < n + m; ++j)
        d(i, j) = (xy.row(i) - xy.row(j)).norm();
    inst.cost = metric_closure(d);
  } else {
    toks = next_tokens();
    if (toks.size() != 1 || toks[0] != "matrix") parse_fail(ln, "expected 'matrix'");
    // Rows in declaration order: depots then clients.
    const int N = n + m;
    Eigen::MatrixXd file_order(N, N);
    for (int i = 0; i < N; ++i) {
      toks = next_tokens();
      if (static_cast<int>(toks.size()) != N) parse_fail(ln, "matrix row has wrong width");
      for (int j = 0; j < N; ++j) {
        try {
          file_order(i, j) = std::stod(toks[j]);
        } catch (...) {
          parse_fail(ln, "bad matrix entry");
        }
        if (file_order(i, j) < 0) parse_fail(ln, "negative cost");
      }
    }
    for (int i = 0; i < N; ++i) {
      if (file_order(i, i) != 0.0) parse_fail(ln, "nonzero matrix diagonal");
      for (int j = 0; j < N; ++j)
        if (std::abs(file_order(i, j) - file_order(j, i)) > kSymmetryTol)
          parse_fail(ln, "matrix asymmetry beyond 1e-9");
    }
    // Reorder to internal layout (clients first).
    auto internal_of_file = [&](int i) { return i < m ? n + i : i - m; };
    Eigen::MatrixXd d(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        d(internal_of_file(i), internal_of_file(j)) = file_order(i, j);
    inst.cost = metric_closure(d);
  }
  return inst;
}

std::string write_instance(const Instance& inst) {
  std::ostringstream out;
  out << "mdvrp 1\n";
  out << "k " << inst.k << "\n";
  const bool coords_mode = inst.coords.has_value();
  out << "mode " << (coords_mode ? "coords" : "matrix") << "\n";
  out << "depots " << inst.n_depots << "\n";
  for (int r = inst.depot_begin(); r < inst.depot_end(); ++r) {
    out << inst.names[r];
    if (coords_mode)
      out << " " << format_double((*inst.coords)(r, 0)) << " "
          << format_double((*inst.coords)(r, 1));
    out << "\n";
  }
  out << "clients " << inst.n_clients << "\n";
  for (int v = 0; v < inst.n_clients; ++v) {
    out << inst.names[v];
    if (coords_mode)
      out << " " << format_double((*inst.coords)(v, 0)) << " "
          << format_double((*inst.coords)(v, 1));
    out << "\n";
  }
  if (!coords_mode) {
    out << "matrix\n";
    const int N = inst.num_nodes();
    auto internal_of_file = [&](int i) {
      return i < inst.n_depots ? inst.n_clients + i : i - inst.n_depots;
    };
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (j) out << " ";
        out << format_double(inst.cost(internal_of_file(i), internal_of_file(j)));
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string write_solution(const Instance& inst, const Solution& s) {
  std::ostringstream out;
  for (const Tour& t : s.tours) {
    out << inst.names[t.depot] << ":";
    for (int v : t.clients) out << " " << inst.names[v];
    out << "\n";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", solution_cost(inst, s));
  out << "cost " << buf << "\n";
  return out.str();
}

Solution parse_solution(const Instance& inst, const std::string& text) {
  std::map<std::string, int> index;
  for (int i = 0; i < inst.num_nodes(); ++i) index[inst.names[i]] = i;
  Solution sol;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "cost") continue;  // trailing summary line
    if (first.empty() || first.back() != ':')
      parse_fail(ln, "expected '<depot>:' at start of tour line");
    first.pop_back();
    auto it = index.find(first);
    if (it == index.end()) parse_fail(ln, "unknown depot '" + first + "'");
    Tour t;
    t.depot = it->second;
    std::string id;
    while (ls >> id) {
      auto ci = index.find(id);
      if (ci == index.end()) parse_fail(ln, "unknown client '" + id + "'");
      t.clients.push_back(ci->second);
    }
    sol.tours.push_back(std::move(t));
  }
  return sol;
}

Instance generate_random(std::uint64_t seed, int n_clients, int n_depots,
                         int k, GenMode mode) {
  if (n_clients < 1 || n_depots < 1 || k < 1)
    throw std::invalid_argument("generator arguments out of range");
  Rng rng(seed);
  const int N = n_clients + n_depots;
  Eigen::MatrixX2d xy(N, 2);
  for (int r = 0; r < n_depots; ++r) {
    xy(n_clients + r, 0) = rng.uniform01();
    xy(n_clients + r, 1) = rng.uniform01();
  }
  if (mode == GenMode::EuclideanUniform) {
    for (int v = 0; v < n_clients; ++v) {
      xy(v, 0) = rng.uniform01();
      xy(v, 1) = rng.uniform01();
    }
  } else {
    const int n_clusters = std::max(2, n_clients / 10);
    Eigen::MatrixX2d centers(n_clusters, 2);
    for (int c = 0; c < n_clusters; ++c) {
      centers(c, 0) = rng.uniform01();
      centers(c, 1) = rng.uniform01();
    }
    for (int v = 0; v < n_clients; ++v) {
      const int c = static_cast<int>(rng.uniform01() * n_clusters) % n_clusters;
      xy(v, 0) = std::clamp(centers(c, 0) + 0.05 * rng.normal(), 0.0, 1.0);
      xy(v, 1) = std::clamp(centers(c, 1) + 0.05 * rng.normal(), 0.0, 1.0);
    }
  }
  Instance inst;
  inst.n_clients = n_clients;
  inst.n_depots = n_depots;
  inst.k = k;
  for (int v = 0; v < n_clients; ++v) inst.names.push_back("c" + std::to_string(v));
  for (int r = 0; r < n_depots; ++r) inst.names.push_back("d" + std::to_string(r));
  inst.coords = xy;
  Eigen::MatrixXd d(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) d(i, j) = (xy.row(i) - xy.row(j)).norm();
  inst.cost = d;  // Euclidean distances are already metric
  return inst;
}

Preprocessed preprocess(const Instance& inst) {
  Preprocessed pre;
  const double zero_tol = 1e-12 * std::max(1.0, inst.diameter());
  for (int v = 0; v < inst.n_clients; ++v) {
    if (inst.depot_distance(v) <= zero_tol)
      pre.free_clients.push_back(v);
    else
      pre.kept_clients.push_back(v);
  }
  const int n = static_cast<int>(pre.kept_clients.size());
  const int m = inst.n_depots;
  Instance sub;
  sub.n_clients = n;
  sub.n_depots = m;
  sub.k = inst.k;
  std::vector<int> old_of_new(n + m);
  for (int i = 0; i < n; ++i) old_of_new[i] = pre.kept_clients[i];
  for (int r = 0; r < m; ++r) old_of_new[n + r] = inst.n_clients + r;
  for (int i = 0; i < n + m; ++i) sub.names.push_back(inst.names[old_of_new[i]]);
  sub.cost.resize(n + m, n + m);
  for (int i = 0; i < n + m; ++i)
    for (int j = 0; j < n + m; ++j)
      sub.cost(i, j) = inst.cost(old_of_new[i], old_of_new[j]);
  if (inst.coords) {
    Eigen::MatrixX2d xy(n + m, 2);
    for (int i = 0; i < n + m; ++i) xy.row(i) = inst.coords->row(old_of_new[i]);
    sub.coords = xy;
  }
  pre.inst = std::move(sub);
  return pre;
}

Solution lift_solution(const Instance& original, const Preprocessed& pre,
                       const Solution& sub) {
  Solution out;
  const int n = static_cast<int>(pre.kept_clients.size());
  for (const Tour& t : sub.tours) {
    Tour lifted;
    lifted.depot = original.n_clients + (t.depot - n);
    for (int v : t.clients) lifted.clients.push_back(pre.kept_clients[v]);
    out.tours.push_back(std::move(lifted));
  }
  for (int v : pre.free_clients) {
    Tour t;
    t.depot = original.nearest_depot(v);
    t.clients = {v};
    out.tours.push_back(std::move(t));
  }
  return out;
}

}  // namespace mdvrp
