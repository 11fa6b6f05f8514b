#include "qinfer/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "qinfer/network_io.hpp"

namespace qinfer::cli {
namespace {

using nlohmann::json;

constexpr double kChop = 1e-13;

double rounded(double x) {
  const std::string s = format_number(x);
  return std::stod(s);
}

std::string format_complex(Complex z) {
  if (std::abs(z.imag()) < kChop) return format_number(z.real());
  std::string re = format_number(z.real());
  std::string im = format_number(std::abs(z.imag()));
  return re + (z.imag() < 0 ? "-" : "+") + im + "i";
}

enum class Format { table, csv, json };

const std::map<std::string, Format>& format_names() {
  static const std::map<std::string, Format> m{{"table", Format::table}, {"csv", Format::csv}, {"json", Format::json}};
  return m;
}

monty::ScenarioKind scenario_from(const std::string& text, const std::optional<double>& lambda) {
  if (text == "bar") {
    if (!lambda) throw PreconditionError("scenario 'bar' needs --lambda");
    return monty::ScenarioKind::bar(*lambda);
  }
  if (lambda) throw PreconditionError("--lambda only applies to the bar scenario");
  return monty::ScenarioKind::parse(text);
}

json result_json(const monty::ScenarioKind& kind, const monty::GameResult& r) {
  return {{"scenario", kind.name()},
          {"pick", r.query.pick},
          {"open", r.query.open},
          {"by_door", {rounded(r.by_door[0]), rounded(r.by_door[1]), rounded(r.by_door[2])}},
          {"stay_win", rounded(r.stay_win)},
          {"switch_win", rounded(r.switch_win)},
          {"switch_target", r.switch_target}};
}

std::string result_csv_row(const monty::ScenarioKind& kind, const monty::GameResult& r) {
  std::ostringstream os;
  os << kind.name() << ',' << r.query.pick << ',' << r.query.open << ',' << format_number(r.by_door[0]) << ','
     << format_number(r.by_door[1]) << ',' << format_number(r.by_door[2]) << ',' << format_number(r.stay_win) << ','
     << format_number(r.switch_win);
  return os.str();
}

constexpr const char* kResultCsvHeader = "scenario,pick,open,p0,p1,p2,stay_win,switch_win";

void print_result(std::ostream& out, Format fmt, const monty::ScenarioKind& kind, const monty::GameResult& r) {
  switch (fmt) {
    case Format::json:
      out << result_json(kind, r).dump(2) << '\n';
      break;
    case Format::csv:
      out << kResultCsvHeader << '\n' << result_csv_row(kind, r) << '\n';
      break;
    case Format::table:
      out << "scenario  " << kind.name() << '\n'
          << "pick      " << r.query.pick << '\n'
          << "open      " << r.query.open << '\n'
          << "by_door   " << format_number(r.by_door[0]) << ' ' << format_number(r.by_door[1]) << ' '
          << format_number(r.by_door[2]) << '\n'
          << "stay      " << format_number(r.stay_win) << '\n'
          << "switch    " << format_number(r.switch_win) << " (door " << r.switch_target << ")\n";
      break;
  }
}

void print_cells(std::ostream& out, std::ostream& err, Format fmt, const monty::ScenarioKind& kind,
                 const std::vector<monty::PlayCell>& cells) {
  if (fmt == Format::json) {
    json rows = json::array();
    for (const auto& c : cells) {
      if (c.result)
        rows.push_back(result_json(kind, *c.result));
      else
        rows.push_back({{"scenario", kind.name()}, {"pick", c.query.pick}, {"open", c.query.open}, {"error", c.error}});
    }
    out << rows.dump(2) << '\n';
    return;
  }
  if (fmt == Format::csv) {
    out << kResultCsvHeader << '\n';
    for (const auto& c : cells) {
      if (c.result)
        out << result_csv_row(kind, *c.result) << '\n';
      else
        err << "pick " << c.query.pick << " open " << c.query.open << ": " << c.error << '\n';
    }
    return;
  }
  out << "scenario " << kind.name() << '\n';
  out << "pick open  p0               p1               p2               stay             switch\n";
  for (const auto& c : cells) {
    std::ostringstream row;
    row << std::left << std::setw(5) << c.query.pick << std::setw(6) << c.query.open;
    if (c.result) {
      for (double v : {c.result->by_door[0], c.result->by_door[1], c.result->by_door[2], c.result->stay_win,
                       c.result->switch_win})
        row << std::setw(17) << format_number(v);
    } else {
      row << "error: " << c.error;
    }
    std::string line = row.str();
    line.erase(line.find_last_not_of(' ') + 1);
    out << line << '\n';
  }
}

Evidence parse_evidence(const std::vector<std::string>& items) {
  Evidence ev;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw PreconditionError("evidence must look like id=index, got '" + item + "'");
    const std::string id = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    Index v = 0;
    std::size_t used = 0;
    try {
      v = std::stoll(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size()) throw PreconditionError("evidence index must be an integer, got '" + item + "'");
    ev.emplace_back(id, v);
  }
  return ev;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::string format_number(double x) {
  if (std::abs(x) < kChop) x = 0.0;
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12) << x;
  return os.str();
}

std::string sweep_csv(const std::vector<monty::SweepPoint>& points) {
  std::string s = "lambda,stay_win\n";
  for (const auto& p : points) s += format_number(p.lambda) + "," + format_number(p.stay_win) + "\n";
  return s;
}

std::string sweep_svg(const std::vector<monty::SweepPoint>& points) {
  constexpr double kWidth = 480, kHeight = 360, kLeft = 60, kRight = 20, kTop = 20, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto x_of = [&](double v) { return kLeft + v * plot_w; };
  const auto y_of = [&](double v) { return kTop + (1.0 - v) * plot_h; };

  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  os << "  <g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  os << "    <line x1=\"" << x_of(0) << "\" y1=\"" << y_of(0) << "\" x2=\"" << x_of(1) << "\" y2=\"" << y_of(0)
     << "\"/>\n";
  os << "    <line x1=\"" << x_of(0) << "\" y1=\"" << y_of(0) << "\" x2=\"" << x_of(0) << "\" y2=\"" << y_of(1)
     << "\"/>\n";
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    os << "    <line x1=\"" << x_of(t) << "\" y1=\"" << y_of(0) << "\" x2=\"" << x_of(t) << "\" y2=\"" << y_of(0) + 5
       << "\"/>\n";
    os << "    <line x1=\"" << x_of(0) - 5 << "\" y1=\"" << y_of(t) << "\" x2=\"" << x_of(0) << "\" y2=\"" << y_of(t)
       << "\"/>\n";
  }
  os << "  </g>\n";
  os << "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    os << "    <text x=\"" << x_of(t) << "\" y=\"" << y_of(0) + 18 << "\" text-anchor=\"middle\">" << t << "</text>\n";
    os << "    <text x=\"" << x_of(0) - 8 << "\" y=\"" << y_of(t) + 4 << "\" text-anchor=\"end\">" << t << "</text>\n";
  }
  os << "    <text x=\"" << x_of(0.5) << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">lambda</text>\n";
  os << "    <text x=\"15\" y=\"" << y_of(0.5) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << y_of(0.5)
     << ")\">P(win | stay)</text>\n";
  os << "  </g>\n";
  os << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t k = 0; k < points.size(); ++k)
    os << (k ? " " : "") << format_number(x_of(points[k].lambda)) << ',' << format_number(y_of(points[k].stay_win));
  os << "\"/>\n</svg>\n";
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inference on quantum Bayesian networks and the quantum Monty Hall game", "qinfer"};
  app.require_subcommand(1);

  std::string scenario;
  std::optional<double> lambda;
  Index pick = 0, open = 0;
  std::string format_name = "table";
  std::string out_path;
  std::string network_path;
  std::vector<std::string> evidence_items;
  std::string query;
  int steps = 101;

  const auto add_scenario = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "classical, tilde, hat, breve, bar(L) or bar with --lambda")->required();
    cmd->add_option("--lambda", lambda, "mixture weight for the bar scenario")->check(CLI::Range(0.0, 1.0));
  };
  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_name, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->default_val("table");
  };

  auto* play_cmd = app.add_subcommand("play", "Posterior over the prize after a pick and a host opening");
  add_scenario(play_cmd);
  play_cmd->add_option("--pick", pick, "door picked by the player")->required();
  play_cmd->add_option("--open", open, "door opened by the host")->required();
  add_format(play_cmd);

  auto* table_cmd = app.add_subcommand("table", "All six legal (pick, open) plays of a scenario");
  add_scenario(table_cmd);
  add_format(table_cmd);

  auto* host_cmd = app.add_subcommand("host", "Host's best door to open against a given pick");
  add_scenario(host_cmd);
  host_cmd->add_option("--pick", pick, "door picked by the player")->required();
  add_format(host_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Stay-win probability of bar(lambda) over lambda in [0,1]");
  std::string sweep_format;
  sweep_cmd->add_option("--steps", steps, "number of lambda samples (>= 2)")->default_val(101);
  sweep_cmd->add_option("--out", out_path, "output file")->required();
  sweep_cmd->add_option("--format", sweep_format, "csv or svg (default from the file extension)")
      ->check(CLI::IsMember({"csv", "svg"}));

  auto* infer_cmd = app.add_subcommand("infer", "Posterior of a node in a network file given evidence");
  infer_cmd->add_option("--network", network_path, "network JSON file")->required();
  infer_cmd->add_option("--evidence", evidence_items, "id=index assignments, applied in order");
  infer_cmd->add_option("--query", query, "node id to report")->required();
  add_format(infer_cmd);

  auto* validate_cmd = app.add_subcommand("validate", "Check a network file against all invariants");
  validate_cmd->add_option("--network", network_path, "network JSON file")->required();

  auto* export_cmd = app.add_subcommand("export", "Write a Monty Hall scenario as a network file");
  add_scenario(export_cmd);
  export_cmd->add_option("--out", out_path, "output file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const Format fmt = format_names().at(format_name);
  try {
    if (play_cmd->parsed()) {
      const auto kind = scenario_from(scenario, lambda);
      print_result(out, fmt, kind, monty::play(kind, {pick, open}));
    } else if (table_cmd->parsed()) {
      const auto kind = scenario_from(scenario, lambda);
      print_cells(out, err, fmt, kind, monty::all_plays(kind));
    } else if (host_cmd->parsed()) {
      const auto kind = scenario_from(scenario, lambda);
      const auto analysis = monty::host_strategy_analysis(kind, pick);
      if (fmt == Format::json) {
        json options = json::array();
        for (const auto& o : analysis.options)
          options.push_back({{"open", o.open},
                             {"stay_win", rounded(o.stay_win)},
                             {"switch_win", rounded(o.switch_win)},
                             {"best_response", rounded(o.best_response)}});
        out << json{{"scenario", kind.name()},
                    {"pick", analysis.pick},
                    {"options", options},
                    {"minimizing_opens", analysis.minimizing_opens},
                    {"minimized_best_response", rounded(analysis.minimized_best_response)},
                    {"tie", analysis.tie()}}
                   .dump(2)
            << '\n';
      } else if (fmt == Format::csv) {
        out << "scenario,pick,open,stay_win,switch_win,best_response,minimizing\n";
        for (const auto& o : analysis.options) {
          const bool minimizing = std::find(analysis.minimizing_opens.begin(), analysis.minimizing_opens.end(),
                                            o.open) != analysis.minimizing_opens.end();
          out << kind.name() << ',' << analysis.pick << ',' << o.open << ',' << format_number(o.stay_win) << ','
              << format_number(o.switch_win) << ',' << format_number(o.best_response) << ',' << (minimizing ? 1 : 0)
              << '\n';
        }
      } else {
        out << "scenario " << kind.name() << ", pick " << analysis.pick << '\n';
        for (const auto& o : analysis.options)
          out << "open " << o.open << ": stay " << format_number(o.stay_win) << ", switch "
              << format_number(o.switch_win) << ", best response " << format_number(o.best_response) << '\n';
        out << "host minimizes the player to " << format_number(analysis.minimized_best_response) << " by opening";
        for (auto c : analysis.minimizing_opens) out << ' ' << c;
        out << (analysis.tie() ? " (tie)\n" : "\n");
      }
    } else if (sweep_cmd->parsed()) {
      if (steps < 2) {
        err << "error: --steps must be at least 2\n";
        return kUsage;
      }
      std::string kind = sweep_format;
      if (kind.empty()) kind = out_path.size() >= 4 && out_path.ends_with(".svg") ? "svg" : "csv";
      const auto points = monty::lambda_sweep(steps);
      for (const auto& p : points) {
        if (p.symmetric()) continue;
        err << "warning: pairs disagree at lambda " << format_number(p.lambda) << ":";
        for (double v : p.per_pair) err << ' ' << format_number(v);
        err << '\n';
      }
      write_file(out_path, kind == "svg" ? sweep_svg(points) : sweep_csv(points));
      out << "wrote " << points.size() << " points to " << out_path << '\n';
    } else if (infer_cmd->parsed()) {
      const AcausalNetwork net = load_network(network_path);
      const Evidence ev = parse_evidence(evidence_items);
      const DensityOperator post = posterior(net, ev, query);
      const ComplexMatrix& m = post.matrix();
      if (fmt == Format::json) {
        json evj = json::array();
        for (const auto& [id, v] : ev) evj.push_back({{"node", id}, {"value", v}});
        json rows = json::array();
        for (Index i = 0; i < m.rows(); ++i) {
          json row = json::array();
          for (Index j = 0; j < m.cols(); ++j) row.push_back({rounded(m(i, j).real()), rounded(m(i, j).imag())});
          rows.push_back(row);
        }
        json diag = json::array();
        for (Index i = 0; i < m.rows(); ++i) diag.push_back(rounded(m(i, i).real()));
        out << json{{"query", query}, {"evidence", evj}, {"posterior", rows}, {"diagonal", diag}}.dump(2) << '\n';
      } else if (fmt == Format::csv) {
        out << "row,col,re,im\n";
        for (Index i = 0; i < m.rows(); ++i)
          for (Index j = 0; j < m.cols(); ++j)
            out << i << ',' << j << ',' << format_number(m(i, j).real()) << ',' << format_number(m(i, j).imag())
                << '\n';
      } else {
        out << "query " << query << "\nevidence";
        if (ev.empty()) out << " (none)";
        for (const auto& [id, v] : ev) out << ' ' << id << '=' << v;
        out << "\nposterior\n";
        for (Index i = 0; i < m.rows(); ++i) {
          out << ' ';
          for (Index j = 0; j < m.cols(); ++j) out << ' ' << format_complex(m(i, j));
          out << '\n';
        }
        out << "diagonal";
        for (Index i = 0; i < m.rows(); ++i) out << ' ' << format_number(m(i, i).real());
        out << '\n';
      }
    } else if (validate_cmd->parsed()) {
      const AcausalNetwork net = load_network(network_path, false);
      const auto violations = validate(net);
      if (!violations.empty()) {
        for (const auto& v : violations) err << v.str() << '\n';
        return kValidation;
      }
      out << "valid: " << net.nodes.size() << " nodes, dims " << net.dims().str() << '\n';
    } else if (export_cmd->parsed()) {
      save_network(monty::build_scenario(scenario_from(scenario, lambda)), out_path);
      out << "wrote " << out_path << '\n';
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ImpossibleEvidence& e) {
    err << "error: " << e.what() << '\n';
    return kImpossibleEvidence;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}

}  // namespace qinfer::cli
