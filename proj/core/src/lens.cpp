#include "romanlens/lens.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "romanlens/error.hpp"
#include "romanlens/parallel.hpp"
#include "romanlens/utf8.hpp"

namespace romanlens {

namespace {

constexpr int kCellWidth = 72;
constexpr int kCellHeight = 22;
constexpr int kMarginLeft = 48;
constexpr int kMarginBottom = 28;
constexpr std::size_t kMaxCellChars = 8;

void check_trace(const ResidualTrace& trace, const Checkpoint& ckpt) {
  const ModelConfig& c = ckpt.config();
  if (trace.states.rank() != 3 || trace.n_states() != c.n_layers + 1 || trace.dim() != c.dim) {
    fail(ErrorKind::Shape, "trace does not match the checkpoint config");
  }
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string cell_label(const std::string& text) {
  const std::u32string cps = utf8::decode(text);
  if (cps.size() <= kMaxCellChars) return text;
  return utf8::encode(std::u32string_view(cps).substr(0, kMaxCellChars - 1)) + "\xE2\x80\xA6";
}

}  // namespace

std::span<const float> LensGrid::probs_at(std::size_t layer, std::size_t position) const {
  if (layer >= n_layers || position >= n_positions) fail(ErrorKind::Range, "lens cell out of range");
  return probs.data().subspan((layer * n_positions + position) * vocab_size, vocab_size);
}

Distribution LensGrid::distribution(std::size_t layer, std::size_t position) const {
  auto p = probs_at(layer, position);
  return Distribution(std::vector<float>(p.begin(), p.end()));
}

double LensGrid::entropy_at(std::size_t layer, std::size_t position) const {
  probs_at(layer, position);
  return entropies[layer * n_positions + position];
}

TokenId LensGrid::argmax_at(std::size_t layer, std::size_t position) const {
  probs_at(layer, position);
  return argmax_tokens[layer * n_positions + position];
}

LensGrid logit_lens(const ResidualTrace& trace, const Checkpoint& ckpt) {
  check_trace(trace, ckpt);
  LensGrid grid;
  grid.n_layers = trace.n_states();
  grid.n_positions = trace.n_positions();
  grid.vocab_size = ckpt.config().vocab_size;
  grid.probs = Tensor({grid.n_layers, grid.n_positions, grid.vocab_size});
  const std::size_t cells = grid.n_layers * grid.n_positions;
  grid.entropies.assign(cells, 0.0);
  grid.argmax_tokens.assign(cells, 0);

  parallel_for(cells, [&](std::size_t cell) {
    const std::size_t layer = cell / grid.n_positions;
    const std::size_t pos = cell % grid.n_positions;
    const Distribution dist = softmax(unembed(ckpt, trace.state(layer, pos)));
    auto dst = grid.probs.data().subspan(cell * grid.vocab_size, grid.vocab_size);
    std::copy(dist.probs().begin(), dist.probs().end(), dst.begin());
    grid.entropies[cell] = entropy(dist);
    grid.argmax_tokens[cell] = static_cast<TokenId>(dist.argmax());
  });
  return grid;
}

std::vector<Distribution> lens_column(const ResidualTrace& trace, const Checkpoint& ckpt,
                                      std::size_t position) {
  check_trace(trace, ckpt);
  std::vector<Distribution> column;
  column.reserve(trace.n_states());
  for (std::size_t layer = 0; layer < trace.n_states(); ++layer) {
    column.push_back(softmax(unembed(ckpt, trace.state(layer, position))));
  }
  return column;
}

Rgb entropy_color(double entropy, std::size_t vocab_size) {
  const double max_entropy = vocab_size > 1 ? std::log(static_cast<double>(vocab_size)) : 1.0;
  const double t = std::clamp(entropy / max_entropy, 0.0, 1.0);
  return Rgb{static_cast<int>(std::lround(255.0 * t)), 0,
             static_cast<int>(std::lround(255.0 * (1.0 - t)))};
}

void emit_heatmap(const LensGrid& grid, LayerWindow window, const Vocabulary& v,
                  const std::filesystem::path& out) {
  if (window.lo > window.hi || window.hi >= grid.n_layers) {
    fail(ErrorKind::Argument, "layer window [" + std::to_string(window.lo) + ", " +
                                  std::to_string(window.hi) + "] outside the grid");
  }
  const std::size_t rows = window.hi - window.lo + 1;
  const int width = kMarginLeft + static_cast<int>(grid.n_positions) * kCellWidth;
  const int height = static_cast<int>(rows) * kCellHeight + kMarginBottom;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"monospace\" font-size=\"11\">\n";
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t layer = window.hi - r;  // top row is the highest layer
    const int y = static_cast<int>(r) * kCellHeight;
    svg << "<text class=\"layer-label\" x=\"4\" y=\"" << y + 15 << "\">" << layer << "</text>\n";
    for (std::size_t pos = 0; pos < grid.n_positions; ++pos) {
      const int x = kMarginLeft + static_cast<int>(pos) * kCellWidth;
      const Rgb c = entropy_color(grid.entropy_at(layer, pos), grid.vocab_size);
      const std::string label = cell_label(v.display(grid.argmax_at(layer, pos)));
      svg << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellWidth
          << "\" height=\"" << kCellHeight << "\" fill=\"rgb(" << c.r << "," << c.g << ","
          << c.b << ")\"/>\n"
          << "<text class=\"token\" x=\"" << x + 4 << "\" y=\"" << y + 15
          << "\" fill=\"white\" xml:space=\"preserve\">" << xml_escape(label) << "</text>\n";
    }
  }
  const int axis_y = static_cast<int>(rows) * kCellHeight + 18;
  for (std::size_t pos = 0; pos < grid.n_positions; ++pos) {
    svg << "<text class=\"position-label\" x=\""
        << kMarginLeft + static_cast<int>(pos) * kCellWidth + 4 << "\" y=\"" << axis_y << "\">"
        << pos << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write heatmap " + out.string());
  f << svg.str();
  if (!f) fail(ErrorKind::Io, "failed writing heatmap " + out.string());
}

void write_lens_csv(const LensGrid& grid, const std::filesystem::path& out) {
  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + out.string());
  f << "layer,position,argmax_id,argmax_prob,entropy\n" << std::setprecision(9);
  for (std::size_t layer = 0; layer < grid.n_layers; ++layer) {
    for (std::size_t pos = 0; pos < grid.n_positions; ++pos) {
      const TokenId id = grid.argmax_at(layer, pos);
      f << layer << "," << pos << "," << id << "," << grid.probs_at(layer, pos)[id] << ","
        << grid.entropy_at(layer, pos) << "\n";
    }
  }
  if (!f) fail(ErrorKind::Io, "failed writing " + out.string());
}

}  // namespace romanlens
