#include "gpfail/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "gpfail/errors.hpp"

namespace gpfail {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open for writing: " + path);
  }
  return out;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void close_checked(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw ConfigError("write failed: " + path);
  }
}

}  // namespace

std::string fmt_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out = open_out(path);
  const Eigen::Index d = trace.points.cols();
  out << "step";
  for (Eigen::Index j = 0; j < d; ++j) {
    out << ",x" << (j + 1);
  }
  out << ",z,alpha_hat,alpha_plugin\n";
  for (Eigen::Index i = 0; i < trace.points.rows(); ++i) {
    out << (i + 1);
    for (Eigen::Index j = 0; j < d; ++j) {
      out << ',' << fmt_double(trace.points(i, j));
    }
    out << ',' << fmt_double(trace.values(i));
    const Eigen::Index k = i + 1 - trace.n0;
    if (k < 0) {
      out << ",nan,nan";
    } else {
      out << ',' << fmt_double(trace.alpha_hat(k)) << ','
          << fmt_double(trace.alpha_plugin(k));
    }
    out << '\n';
  }
  close_checked(out, path);
}

void write_meta(const std::string& path,
                const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : entries) {
    out << key << " = " << value << '\n';
  }
  close_checked(out, path);
}

void write_ngamma_csv(const std::string& path, const FourBranchReport& report) {
  std::ofstream out = open_out(path);
  out << "criterion,params,gamma,mean_n_gamma,p10,p90,not_attained_fraction\n";
  for (const auto& row : report.rows) {
    out << quoted(row.label) << ',' << quoted(row.params) << ','
        << fmt_double(row.gamma) << ',' << fmt_double(row.mean_n) << ','
        << fmt_double(row.p10) << ',' << fmt_double(row.p90) << ','
        << fmt_double(row.not_attained_fraction) << '\n';
  }
  close_checked(out, path);
}

void write_rmse_csv(const std::string& path, const GpPathReport& report) {
  std::ofstream out = open_out(path);
  out << "criterion,params,d,n,rmse_db\n";
  for (const auto& row : report.rows) {
    out << quoted(row.label) << ',' << quoted(row.params) << ',' << row.d << ','
        << row.n << ',';
    if (std::isinf(row.rmse_db) && row.rmse_db < 0) {
      out << "exact";
    } else {
      out << fmt_double(row.rmse_db);
    }
    out << '\n';
  }
  close_checked(out, path);
}

void write_scores_csv(const std::string& path, const StepScores& scores) {
  std::ofstream out = open_out(path);
  const Eigen::Index d = scores.sample.points.cols();
  out << "sample_index";
  for (Eigen::Index j = 0; j < d; ++j) {
    out << ",x" << (j + 1);
  }
  out << ",score\n";
  for (std::size_t i = 0; i < scores.selection.searched_indices.size(); ++i) {
    const int idx = scores.selection.searched_indices[i];
    out << idx;
    for (Eigen::Index j = 0; j < d; ++j) {
      out << ',' << fmt_double(scores.sample.points(idx, j));
    }
    out << ',' << fmt_double(scores.selection.scores(static_cast<Eigen::Index>(i)))
        << '\n';
  }
  close_checked(out, path);
}

void write_posterior_csv(const std::string& path, const MCSample& sample,
                         const PosteriorSummary& summary) {
  std::ofstream out = open_out(path);
  const Eigen::Index d = sample.points.cols();
  out << "sample_index";
  for (Eigen::Index j = 0; j < d; ++j) {
    out << ",x" << (j + 1);
  }
  out << ",mean,sd,p_excursion,tau\n";
  for (Eigen::Index i = 0; i < sample.points.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < d; ++j) {
      out << ',' << fmt_double(sample.points(i, j));
    }
    out << ',' << fmt_double(summary.mean(i)) << ',' << fmt_double(summary.sd(i))
        << ',' << fmt_double(summary.p(i)) << ',' << fmt_double(summary.tau(i))
        << '\n';
  }
  close_checked(out, path);
}

}  // namespace gpfail
