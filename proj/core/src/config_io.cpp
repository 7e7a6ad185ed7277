#include "aggsolve/config_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace aggsolve {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Field {
  std::string value;
  int line = 0;
};

struct RawConfig {
  std::string source;
  // section -> key -> field; sections with numbered suffixes kept verbatim
  std::map<std::string, std::map<std::string, Field>> sections;

  [[noreturn]] void die(const std::string& where, const std::string& msg,
                        int line = 0) const {
    fail(ErrorKind::Config, source + (line ? ":" + std::to_string(line) : "") +
                                ": " + where + ": " + msg);
  }

  bool has(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    return s != sections.end() && s->second.count(key) > 0;
  }

  const Field& get(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    if (s == sections.end()) die("[" + sec + "]", "missing section");
    auto k = s->second.find(key);
    if (k == s->second.end())
      die("[" + sec + "]", "missing field '" + key + "'");
    return k->second;
  }
};

RawConfig tokenize(const std::string& text, const std::string& source) {
  RawConfig raw;
  raw.source = source;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string body = line.substr(first, last - first + 1);
    if (body.front() == '[') {
      if (body.back() != ']')
        raw.die("line", "unterminated section header", lineno);
      section = body.substr(1, body.size() - 2);
      raw.sections[section];
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string::npos)
      raw.die("line", "expected 'key = value'", lineno);
    if (section.empty()) raw.die("line", "field outside any section", lineno);
    std::string key = body.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = body.substr(eq + 1);
    auto vfirst = value.find_first_not_of(" \t");
    value = vfirst == std::string::npos ? "" : value.substr(vfirst);
    raw.sections[section][key] = {value, lineno};
  }
  return raw;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else if (c == '|' || c == ';') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
      out.push_back(std::string(1, c));
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

class FieldReader {
 public:
  FieldReader(const RawConfig& raw, const std::string& sec,
              const std::string& key)
      : raw_(raw), where_("[" + sec + "] " + key) {
    const Field& f = raw.get(sec, key);
    line_ = f.line;
    tokens_ = split_tokens(f.value);
  }

  double number() {
    if (pos_ >= tokens_.size())
      raw_.die(where_, "expected a number, found end of value", line_);
    const std::string& t = tokens_[pos_++];
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
      raw_.die(where_, "expected a number, got '" + t + "'", line_);
    return v;
  }

  Eigen::VectorXd numbers(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = number();
    return v;
  }

  std::vector<double> all_numbers() {
    std::vector<double> v;
    while (pos_ < tokens_.size() && tokens_[pos_] != "|" && tokens_[pos_] != ";")
      v.push_back(number());
    return v;
  }

  bool accept(const std::string& sep) {
    if (pos_ < tokens_.size() && tokens_[pos_] == sep) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool done() const { return pos_ >= tokens_.size(); }

  std::string word() {
    if (pos_ >= tokens_.size())
      raw_.die(where_, "expected a word, found end of value", line_);
    return tokens_[pos_++];
  }

  void expect_done() {
    if (!done())
      raw_.die(where_, "unexpected trailing token '" + tokens_[pos_] + "'",
               line_);
  }

  [[noreturn]] void die(const std::string& msg) { raw_.die(where_, msg, line_); }

 private:
  const RawConfig& raw_;
  std::string where_;
  int line_ = 0;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

Eigen::MatrixXd read_matrix(const RawConfig& raw, const std::string& sec,
                            const std::string& key, int cols) {
  FieldReader r(raw, sec, key);
  std::vector<Eigen::VectorXd> rows;
  while (!r.done()) {
    rows.push_back(r.numbers(cols));
    if (!r.done() && !r.accept(";"))
      r.die("expected ';' between matrix rows");
  }
  if (rows.empty()) r.die("empty matrix");
  Eigen::MatrixXd M(static_cast<int>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    M.row(static_cast<int>(i)) = rows[i].transpose();
  return M;
}

// per-piece "start-vector end-vector" groups separated by '|'
void read_piece_values(const RawConfig& raw, const std::string& sec,
                       const std::string& key, int dim, std::size_t n_pieces,
                       std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>* out) {
  FieldReader r(raw, sec, key);
  for (std::size_t k = 0; k < n_pieces; ++k) {
    Eigen::VectorXd v0 = r.numbers(dim);
    Eigen::VectorXd v1 = r.numbers(dim);
    out->push_back({v0, v1});
    if (k + 1 < n_pieces && !r.accept("|"))
      r.die("expected '|' between the " + std::to_string(n_pieces) +
            " pieces");
  }
  r.expect_done();
}

PiecewiseAffineProfile read_profile(const RawConfig& raw,
                                    const std::string& sec,
                                    const std::string& values_key,
                                    const std::string& pieces_key,
                                    const std::vector<double>& default_cuts,
                                    int dim) {
  std::vector<double> cuts = default_cuts;
  if (raw.has(sec, pieces_key)) {
    FieldReader r(raw, sec, pieces_key);
    cuts = r.all_numbers();
    r.expect_done();
  }
  if (cuts.size() < 2)
    fail(ErrorKind::Config, "[" + sec + "] " + pieces_key +
                                ": need at least two boundaries");
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> vals;
  read_piece_values(raw, sec, values_key, dim, cuts.size() - 1, &vals);
  std::vector<PiecewiseAffineProfile::Piece> pieces;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    pieces.push_back({cuts[k], cuts[k + 1], vals[k].first, vals[k].second});
  return PiecewiseAffineProfile(std::move(pieces));
}

}  // namespace

LoadedConfig parse_config(const std::string& text,
                          const std::string& source_name) {
  RawConfig raw = tokenize(text, source_name);

  // [family]
  FieldReader tr(raw, "family", "T");
  int T = static_cast<int>(tr.number());
  tr.expect_done();
  if (T < 1 || T > 4)
    raw.die("[family] T", "dimension must be in 1..4");

  NonatomicGameSpec::Inputs in;
  in.T = T;
  in.cost.D = read_matrix(raw, "family", "D", T);
  if (in.cost.D.rows() != T) raw.die("[family] D", "expected a TxT matrix");
  {
    FieldReader r(raw, "family", "d");
    in.cost.d = r.numbers(T);
    r.expect_done();
  }
  std::string kind =
      raw.has("family", "action_kind")
          ? FieldReader(raw, "family", "action_kind").word()
          : "box";
  int p;  // rhs rows
  if (kind == "box") {
    in.action_kind = PolyKind::Box;
    in.A_poly.resize(2 * T, T);
    in.A_poly.topRows(T) = Eigen::MatrixXd::Identity(T, T);
    in.A_poly.bottomRows(T) = -Eigen::MatrixXd::Identity(T, T);
    p = 2 * T;
  } else if (kind == "general") {
    in.action_kind = PolyKind::General;
    in.A_poly = read_matrix(raw, "family", "A_poly", T);
    p = static_cast<int>(in.A_poly.rows());
  } else {
    raw.die("[family] action_kind", "expected 'box' or 'general'");
  }

  // [theta_profile]
  std::vector<double> cuts;
  {
    FieldReader r(raw, "theta_profile", "pieces");
    cuts = r.all_numbers();
    r.expect_done();
    if (cuts.size() < 2)
      r.die("need at least two boundaries (e.g. 'pieces = 0 1')");
  }
  const std::size_t n_pieces = cuts.size() - 1;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> a_vals, bu_vals;
  read_piece_values(raw, "theta_profile", "a", 1, n_pieces, &a_vals);
  read_piece_values(raw, "theta_profile", "b_u", T, n_pieces, &bu_vals);

  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> rhs_vals;
  if (in.action_kind == PolyKind::Box) {
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> lo_vals, hi_vals;
    read_piece_values(raw, "theta_profile", "lo", T, n_pieces, &lo_vals);
    read_piece_values(raw, "theta_profile", "hi", T, n_pieces, &hi_vals);
    for (std::size_t k = 0; k < n_pieces; ++k) {
      Eigen::VectorXd b0(2 * T), b1(2 * T);
      b0 << hi_vals[k].first, -lo_vals[k].first;
      b1 << hi_vals[k].second, -lo_vals[k].second;
      rhs_vals.push_back({b0, b1});
    }
  } else {
    read_piece_values(raw, "theta_profile", "b", p, n_pieces, &rhs_vals);
  }

  for (std::size_t k = 0; k < n_pieces; ++k) {
    CharacteristicPiece piece;
    piece.lo = cuts[k];
    piece.hi = cuts[k + 1];
    piece.b0 = rhs_vals[k].first;
    piece.b1 = rhs_vals[k].second;
    piece.s0.resize(T + 1);
    piece.s0 << a_vals[k].first, bu_vals[k].first;
    piece.s1.resize(T + 1);
    piece.s1 << a_vals[k].second, bu_vals[k].second;
    in.pieces.push_back(std::move(piece));
  }

  // [constraint]
  std::string ckind = raw.has("constraint", "kind")
                          ? FieldReader(raw, "constraint", "kind").word()
                          : "none";
  if (ckind == "box") {
    FieldReader rlo(raw, "constraint", "lo"), rhi(raw, "constraint", "hi");
    in.aggregate = PolytopeSet::box(rlo.numbers(T), rhi.numbers(T));
  } else if (ckind == "general") {
    Eigen::MatrixXd A = read_matrix(raw, "constraint", "rows", T);
    FieldReader rb(raw, "constraint", "rhs");
    in.aggregate = PolytopeSet::general(A, rb.numbers(static_cast<int>(A.rows())));
  } else if (ckind != "none") {
    raw.die("[constraint] kind", "expected 'none', 'box' or 'general'");
  }

  // [witness] (optional)
  if (raw.sections.count("witness")) {
    FieldReader re(raw, "witness", "eta");
    in.eta = re.number();
    re.expect_done();
    in.witness =
        read_profile(raw, "witness", "xbar", "xbar_pieces", cuts, T);
    if (raw.has("witness", "reference")) {
      FieldReader rr(raw, "witness", "reference");
      in.reference_aggregate = rr.numbers(T);
      rr.expect_done();
    }
  }

  LoadedConfig cfg{NonatomicGameSpec(std::move(in)), SolverConfig{},
                   SweepSettings{}, std::nullopt, 0, ""};

  // [solver] (optional)
  if (raw.sections.count("solver")) {
    if (raw.has("solver", "tol"))
      cfg.solver.tol = FieldReader(raw, "solver", "tol").number();
    if (raw.has("solver", "max_iters"))
      cfg.solver.max_iters =
          static_cast<int>(FieldReader(raw, "solver", "max_iters").number());
    if (raw.has("solver", "seed"))
      cfg.solver.seed = static_cast<std::uint64_t>(
          FieldReader(raw, "solver", "seed").number());
    if (raw.has("solver", "mode")) {
      std::string m = FieldReader(raw, "solver", "mode").word();
      if (m == "vne")
        cfg.solver.mode = GradMode::Vne;
      else if (m == "pseudo")
        cfg.solver.mode = GradMode::Pseudo;
      else
        raw.die("[solver] mode", "expected 'vne' or 'pseudo'");
    }
    if (raw.has("solver", "step")) {
      FieldReader r(raw, "solver", "step");
      std::string w = r.word();
      if (w != "adaptive") cfg.solver.step = std::strtod(w.c_str(), nullptr);
    }
  }

  // [sweep] (optional)
  if (raw.sections.count("sweep")) {
    if (raw.has("sweep", "nus")) {
      FieldReader r(raw, "sweep", "nus");
      for (double v : r.all_numbers()) cfg.sweep.nus.push_back(static_cast<int>(v));
    }
    if (raw.has("sweep", "method")) {
      cfg.sweep.method = FieldReader(raw, "sweep", "method").word();
      if (cfg.sweep.method != "uniform" && cfg.sweep.method != "meshgrid")
        raw.die("[sweep] method", "expected 'uniform' or 'meshgrid'");
    }
    if (raw.has("sweep", "add_theta_axis")) {
      std::string w = FieldReader(raw, "sweep", "add_theta_axis").word();
      cfg.sweep.add_theta_axis = (w == "true" || w == "1");
    }
  }

  // [finite_game] (written by cmd_build)
  if (raw.sections.count("finite_game")) {
    cfg.built_nu =
        static_cast<int>(FieldReader(raw, "finite_game", "nu").number());
    cfg.built_method = FieldReader(raw, "finite_game", "method").word();
    int I = static_cast<int>(FieldReader(raw, "finite_game", "I").number());
    FieldReader rw(raw, "finite_game", "weights");
    Eigen::VectorXd w = rw.numbers(I);
    rw.expect_done();

    std::vector<double> mu(w.data(), w.data() + I);
    std::vector<PolytopeSet> sets;
    std::vector<Eigen::VectorXd> s_bar;
    std::vector<ProvenanceCell> cells;
    for (int i = 0; i < I; ++i) {
      std::string sec = "player_" + std::to_string(i);
      FieldReader rb(raw, sec, "b");
      Eigen::VectorXd b = rb.numbers(p);
      rb.expect_done();
      if (cfg.spec.action_kind() == PolyKind::Box)
        sets.push_back(PolytopeSet::box(-b.tail(T), b.head(T)));
      else
        sets.push_back(PolytopeSet::general(cfg.spec.action_matrix(), b));
      FieldReader rs(raw, sec, "s");
      s_bar.push_back(rs.numbers(T + 1));
      rs.expect_done();
      ProvenanceCell cell;
      FieldReader ri(raw, sec, "intervals");
      auto nums = ri.all_numbers();
      if (nums.size() % 2 != 0) ri.die("intervals come in lo/hi pairs");
      for (std::size_t k = 0; k + 1 < nums.size(); k += 2) {
        cell.intervals.push_back({nums[k], nums[k + 1]});
        cell.measure += nums[k + 1] - nums[k];
      }
      cell.rep_theta = FieldReader(raw, sec, "rep_theta").number();
      cells.push_back(std::move(cell));
    }
    cfg.built_game =
        FiniteGame(T, std::move(mu), std::move(sets), std::move(s_bar),
                   cfg.spec.cost(), cfg.spec.aggregate(), std::move(cells));
  }

  return cfg;
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::Config, path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
  for (int i = 0; i < v.size(); ++i) os << (i ? " " : "") << fmt(v[i]);
}

void write_matrix_rows(std::ostream& os, const Eigen::MatrixXd& M) {
  for (int r = 0; r < M.rows(); ++r) {
    if (r) os << " ; ";
    write_vector(os, M.row(r).transpose());
  }
}

void write_profile_values(std::ostream& os, const PiecewiseAffineProfile& prof) {
  bool first = true;
  for (const auto& piece : prof.pieces()) {
    if (!first) os << " | ";
    first = false;
    write_vector(os, piece.v0);
    os << "  ";
    write_vector(os, piece.v1);
  }
}

}  // namespace

std::string serialize_spec(const NonatomicGameSpec& spec,
                           const SolverConfig& solver,
                           const SweepSettings& sweep) {
  const int T = spec.dim();
  std::ostringstream os;
  os << "[family]\nT = " << T << "\nD = ";
  write_matrix_rows(os, spec.cost().D);
  os << "\nd = ";
  write_vector(os, spec.cost().d);
  os << "\naction_kind = "
     << (spec.action_kind() == PolyKind::Box ? "box" : "general") << "\n";
  if (spec.action_kind() != PolyKind::Box) {
    os << "A_poly = ";
    write_matrix_rows(os, spec.action_matrix());
    os << "\n";
  }

  os << "\n[theta_profile]\npieces =";
  for (const auto& piece : spec.pieces()) os << " " << fmt(piece.lo);
  os << " " << fmt(spec.pieces().back().hi) << "\n";
  auto emit_param = [&](const std::string& key, auto select, int dim) {
    os << key << " = ";
    bool first = true;
    for (const auto& piece : spec.pieces()) {
      if (!first) os << " | ";
      first = false;
      write_vector(os, select(piece, false, dim));
      os << "  ";
      write_vector(os, select(piece, true, dim));
    }
    os << "\n";
  };
  emit_param("a",
             [](const CharacteristicPiece& pc, bool end, int) {
               return Eigen::VectorXd::Constant(1, end ? pc.s1[0] : pc.s0[0])
                   .eval();
             },
             1);
  emit_param("b_u",
             [](const CharacteristicPiece& pc, bool end, int) {
               const Eigen::VectorXd& s = end ? pc.s1 : pc.s0;
               return s.tail(s.size() - 1).eval();
             },
             T);
  if (spec.action_kind() == PolyKind::Box) {
    emit_param("lo",
               [T](const CharacteristicPiece& pc, bool end, int) {
                 const Eigen::VectorXd& b = end ? pc.b1 : pc.b0;
                 return (-b.tail(T)).eval();
               },
               T);
    emit_param("hi",
               [T](const CharacteristicPiece& pc, bool end, int) {
                 const Eigen::VectorXd& b = end ? pc.b1 : pc.b0;
                 return b.head(T).eval();
               },
               T);
  } else {
    emit_param("b",
               [](const CharacteristicPiece& pc, bool end, int) {
                 return end ? pc.b1 : pc.b0;
               },
               static_cast<int>(spec.action_matrix().rows()));
  }

  os << "\n[constraint]\n";
  if (!spec.aggregate()) {
    os << "kind = none\n";
  } else if (spec.aggregate()->kind() == PolyKind::Box) {
    os << "kind = box\nlo = ";
    write_vector(os, spec.aggregate()->lo());
    os << "\nhi = ";
    write_vector(os, spec.aggregate()->hi());
    os << "\n";
  } else {
    os << "kind = general\nrows = ";
    write_matrix_rows(os, spec.aggregate()->constraint_matrix());
    os << "\nrhs = ";
    write_vector(os, spec.aggregate()->rhs());
    os << "\n";
  }

  if (spec.witness()) {
    os << "\n[witness]\neta = " << fmt(spec.eta()) << "\nxbar_pieces =";
    for (const auto& piece : spec.witness()->pieces())
      os << " " << fmt(piece.lo);
    os << " " << fmt(spec.witness()->pieces().back().hi) << "\nxbar = ";
    write_profile_values(os, *spec.witness());
    os << "\n";
    if (spec.reference_aggregate()) {
      os << "reference = ";
      write_vector(os, *spec.reference_aggregate());
      os << "\n";
    }
  }

  os << "\n[solver]\ntol = " << fmt(solver.tol)
     << "\nmax_iters = " << solver.max_iters << "\nmode = "
     << to_string(solver.mode) << "\nseed = " << solver.seed << "\nstep = ";
  if (solver.step)
    os << fmt(*solver.step);
  else
    os << "adaptive";
  os << "\n";

  os << "\n[sweep]\nnus =";
  for (int nu : sweep.nus) os << " " << nu;
  os << "\nmethod = " << sweep.method
     << "\nadd_theta_axis = " << (sweep.add_theta_axis ? "true" : "false")
     << "\n";
  return os.str();
}

std::string serialize_game(const NonatomicGameSpec& spec,
                           const SolverConfig& solver,
                           const SweepSettings& sweep, const FiniteGame& game,
                           int nu, const std::string& method) {
  std::ostringstream os;
  os << serialize_spec(spec, solver, sweep);
  os << "\n[finite_game]\nnu = " << nu << "\nmethod = " << method
     << "\nI = " << game.players() << "\nweights = ";
  for (int i = 0; i < game.players(); ++i)
    os << (i ? " " : "") << fmt(game.weight(i));
  os << "\n";
  for (int i = 0; i < game.players(); ++i) {
    os << "\n[player_" << i << "]\nb = ";
    write_vector(os, game.action_set(i).rhs());
    os << "\ns = ";
    write_vector(os, game.params(i));
    os << "\nintervals =";
    for (const auto& [lo, hi] : game.cells()[i].intervals)
      os << " " << fmt(lo) << " " << fmt(hi);
    os << "\nrep_theta = " << fmt(game.cells()[i].rep_theta) << "\n";
  }
  return os.str();
}

}  // namespace aggsolve
