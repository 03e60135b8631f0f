#include "convdist/edit_distance.hpp"

namespace convdist {

namespace {

// Code points in a UTF-8 string; good enough for column padding of labels.
std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

void pad_to(std::string& row, std::string_view cell, std::size_t width) {
  row += cell;
  row.append(width - display_width(cell), ' ');
}

}  // namespace

std::string render_gap_diagram(std::span<const EditStep> script, std::span<const std::string> a,
                               std::span<const std::string> b) {
  static const std::string kGap = "•";
  std::string top, mid, bottom;
  for (std::size_t k = 0; k < script.size(); ++k) {
    const EditStep& s = script[k];
    if ((s.kind != StepKind::Insert && s.source >= a.size()) || (s.kind != StepKind::Delete && s.target >= b.size())) {
      throw std::out_of_range("render_gap_diagram: step index out of range");
    }
    const std::string& up = s.kind == StepKind::Insert ? kGap : a[s.source];
    const std::string& down = s.kind == StepKind::Delete ? kGap : b[s.target];
    const std::size_t width = std::max(display_width(up), display_width(down));
    if (k > 0) {
      top += ' ';
      mid += ' ';
      bottom += ' ';
    }
    pad_to(top, up, width);
    pad_to(mid, "|", width);
    pad_to(bottom, down, width);
  }
  auto rstrip = [](std::string& s) { s.erase(s.find_last_not_of(' ') + 1); };
  rstrip(top);
  rstrip(mid);
  rstrip(bottom);
  return top + "\n" + mid + "\n" + bottom + "\n";
}

}  // namespace convdist
