#include <sstream>

#include "app.hpp"
#include "gapforge/exact.hpp"
#include "gapforge/serialize.hpp"

namespace gapforge::cli {

int cmd_depth(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate 2-design depth bounds", "depth"};
  int d = 2, m = 1;
  double eps = 1e-3, exponent = 2.0;
  std::string ns = "1000", compare, format = "csv";
  app.add_option("--d", d, "Local qudit dimension");
  app.add_option("--m", m, "Qudits per gate half");
  app.add_option("--eps", eps, "Target accuracy epsilon in (0, 1)");
  app.add_option("--n", ns, "Qudit counts, e.g. 1000 or 64:1024:64");
  app.add_option("--compare-m", compare, "Gate-count comparison, e.g. 1,log");
  app.add_option("--exponent", exponent, "Local gate cost exponent in m");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  if (auto rc = parse_app(app, args, out, err)) return *rc;

  std::ostringstream body;
  try {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidEpsilon("--eps must lie in (0, 1)");
    bool with_ratio = false;
    if (!compare.empty()) {
      const auto parts = split(compare, ',');
      if (parts != std::vector<std::string>{"1", "log"})
        throw InvalidArgument("--compare-m supports '1,log' only");
      with_ratio = true;
    }
    const std::vector<int> nlist = parse_int_list(ns);
    const bool csv = format == "csv";
    if (csv) {
      body << "d,m,n,eps,L_open,L_closed,L_prior,coef_open,coef_closed,coef_prior";
      if (with_ratio) body << ",m_log,N_m1,N_mlog,ratio";
      body << "\n";
    } else {
      body << "[\n";
    }
    for (std::size_t k = 0; k < nlist.size(); ++k) {
      const int n = nlist[k];
      const DepthBound open = design_depth(d, m, n, Boundary::Open, eps);
      const DepthBound closed = design_depth(d, m, n, Boundary::Closed, eps);
      const DepthBound prior = hunter_jones_depth(n, d, eps);
      std::optional<GateCountComparison> g;
      if (with_ratio) g = gate_count_compare(n, eps, exponent);
      if (csv) {
        body << d << ',' << m << ',' << n << ',' << format_double(eps) << ',' << open.L_min << ',' << closed.L_min
             << ',' << prior.L_min << ',' << format_double(open.linear_coefficient) << ','
             << format_double(closed.linear_coefficient) << ',' << format_double(prior.linear_coefficient);
        if (g)
          body << ',' << g->m_log << ',' << format_double(g->N_m1) << ',' << format_double(g->N_mlog) << ','
               << format_double(g->ratio);
        body << "\n";
      } else {
        body << "  {\"d\":" << d << ",\"m\":" << m << ",\"n\":" << n << ",\"open\":" << to_json(open)
             << ",\"closed\":" << to_json(closed) << ",\"prior\":" << to_json(prior);
        if (g)
          body << ",\"m_log\":" << g->m_log << ",\"N_m1\":\"" << format_double(g->N_m1) << "\",\"N_mlog\":\""
               << format_double(g->N_mlog) << "\",\"ratio\":\"" << format_double(g->ratio) << "\"";
        body << "}" << (k + 1 < nlist.size() ? ",\n" : "\n");
      }
    }
    if (!csv) body << "]\n";
  } catch (const std::exception& e) {
    err << "depth: " << e.what() << "\n";
    return kBadArguments;
  }
  out << body.str();
  return kOk;
}

}  // namespace gapforge::cli
