#include <algorithm>
#include <fstream>
#include <sstream>

#include "nfold/augip.hpp"

namespace nfold {

namespace {

std::string var(std::size_t brick, std::size_t col, char part) {
  return "h_" + std::to_string(brick + 1) + "_" + std::to_string(col + 1) +
         "_" + part;
}

// Appends "+ a v_p - a v_n" for coefficient a on h = v_p - v_n.
void split_term(std::ostringstream& out, Int a, std::size_t brick,
                std::size_t col, bool& any) {
  if (a == 0) return;
  const Int mag = a < 0 ? -a : a;
  out << (a > 0 ? " + " : " - ") << mag << " " << var(brick, col, 'p');
  out << (a > 0 ? " - " : " + ") << mag << " " << var(brick, col, 'n');
  any = true;
}

// LP readers limit line length; continue long rows on indented lines,
// breaking before a sign.
std::string wrap_lines(const std::string& text) {
  constexpr std::size_t kWidth = 200;
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    while (line.size() > kWidth) {
      std::size_t cut = line.rfind(" + ", kWidth);
      const std::size_t minus = line.rfind(" - ", kWidth);
      if (cut == std::string::npos || (minus != std::string::npos && minus > cut)) {
        cut = minus;
      }
      if (cut == std::string::npos || cut < 4) break;
      out << line.substr(0, cut) << "\n";
      line = "  " + line.substr(cut + 1);
    }
    out << line << "\n";
  }
  return out.str();
}

}  // namespace

std::string augip_lp_text(const AugQuery& q) {
  const NFoldInstance& inst = *q.inst;
  const std::size_t r = inst.r(), s = inst.s(), t = inst.t(), n = inst.bricks;
  std::ostringstream out;
  out << "\\ augmentation subproblem: instance " << inst.id << ", lambda "
      << q.lambda << ", gc " << q.gc << "\n";

  out << "Minimize\n obj:";
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      split_term(out, inst.weights[i * t + j], i, j, any);
    }
  }
  if (!any) out << " 0 " << var(0, 0, 'p');
  out << "\n";

  out << "Subject To\n";
  for (std::size_t k = 0; k < r; ++k) {
    out << " g_" << k + 1 << ":";
    any = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < t; ++j) split_term(out, inst.e1(k, j), i, j, any);
    }
    if (!any) out << " 0 " << var(0, 0, 'p');
    out << " = 0\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < s; ++k) {
      out << " b_" << i + 1 << "_" << k + 1 << ":";
      any = false;
      for (std::size_t j = 0; j < t; ++j) split_term(out, inst.e2(k, j), i, j, any);
      if (!any) out << " 0 " << var(i, 0, 'p');
      out << " = 0\n";
    }
  }
  out << " l1:";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      out << " + " << var(i, j, 'p') << " + " << var(i, j, 'n');
    }
  }
  out << " <= " << q.gc << "\n";

  out << "Bounds\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      auto [lo, hi] = step_range(inst, q.x, q.lambda, i * t + j);
      out << " 0 <= " << var(i, j, 'p') << " <= " << std::max<Int>(hi, 0)
          << "\n";
      out << " 0 <= " << var(i, j, 'n') << " <= " << std::max<Int>(-lo, 0)
          << "\n";
    }
  }
  out << "Generals\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      out << " " << var(i, j, 'p') << " " << var(i, j, 'n') << "\n";
    }
  }
  out << "End\n";
  return wrap_lines(out.str());
}

std::string augip_lp_filename(const AugQuery& q) {
  const std::string id = q.inst->id.empty() ? "instance" : q.inst->id;
  return id + "_aug_l" + std::to_string(q.lambda) + "_gc" +
         std::to_string(q.gc) + ".lp";
}

void export_augip_lp(const AugQuery& q, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NFoldError("cannot open " + path.string() + " for writing");
  out << augip_lp_text(q);
  if (!out) throw NFoldError("failed writing " + path.string());
}

}  // namespace nfold
