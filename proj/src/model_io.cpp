#include "citecast/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "citecast/errors.hpp"

namespace citecast {

namespace {

constexpr char kMagic[8] = {'C', 'I', 'T', 'E', 'C', 'A', 'S', 'T'};

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(int v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  void raw(const char* data, std::size_t n) { buf_.append(data, n); }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  int i32() { return static_cast<int>(u32()); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  bool flag() {
    auto v = u8();
    if (v > 1) fail("invalid flag byte");
    return v == 1;
  }
  std::string str() {
    auto n = u32();
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  // Element count bounded by the bytes left, so corrupt counts fail cleanly.
  std::size_t count(std::size_t min_element_size) {
    auto n = u64();
    if (n > (data_.size() - pos_) / std::max<std::size_t>(min_element_size, 1)) fail("element count exceeds file size");
    return static_cast<std::size_t>(n);
  }
  void expect(const char* bytes, std::size_t n, const char* what) {
    need(n);
    if (std::memcmp(data_.data() + pos_, bytes, n) != 0) fail(what);
    pos_ += n;
  }
  bool done() const { return pos_ == data_.size(); }
  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(path_, 0, reason); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) fail("unexpected end of file");
  }
  std::string data_;
  std::string path_;
  std::size_t pos_ = 0;
};

void write_strings(Writer& w, const std::vector<std::string>& v) {
  w.u64(v.size());
  for (const auto& s : v) w.str(s);
}

std::vector<std::string> read_strings(Reader& r) {
  std::vector<std::string> v(r.count(4));
  for (auto& s : v) s = r.str();
  return v;
}

void write_stats(Writer& w, const std::vector<double>& mean, const std::vector<double>& sd,
                 const std::vector<bool>& normalized) {
  w.u64(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    w.f64(mean[i]);
    w.f64(sd[i]);
    w.u8(normalized[i] ? 1 : 0);
  }
}

void read_stats(Reader& r, std::vector<double>& mean, std::vector<double>& sd, std::vector<bool>& normalized) {
  auto n = r.count(17);
  mean.resize(n);
  sd.resize(n);
  normalized.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    mean[i] = r.f64();
    sd[i] = r.f64();
    normalized[i] = r.flag();
  }
}

}  // namespace

bool ModelBundle::operator==(const ModelBundle& o) const {
  auto same_channels = [](const std::vector<ChannelInfo>& a, const std::vector<ChannelInfo>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].name != b[i].name || a[i].group != b[i].group || a[i].normalized != b[i].normalized) return false;
    }
    return true;
  };
  const auto& n = normalizer;
  const auto& m = o.normalizer;
  return task == o.task && cutoff == o.cutoff && horizons == o.horizons && broadness_source == o.broadness_source &&
         network.per_paper_units == o.network.per_paper_units && network.hidden_units == o.network.hidden_units &&
         network.output_units == o.network.output_units && network.seed == o.network.seed &&
         features.max_papers == o.features.max_papers && features.category_vocabulary == o.features.category_vocabulary &&
         features.include_topic_vectors == o.features.include_topic_vectors &&
         features.include_broadness == o.features.include_broadness && features.disabled == o.features.disabled &&
         same_channels(manifest, o.manifest) && n.mean == m.mean && n.stddev == m.stddev &&
         n.normalized == m.normalized && n.author_mean == m.author_mean && n.author_stddev == m.author_stddev &&
         n.author_normalized == m.author_normalized && n.degenerate == m.degenerate && params == o.params;
}

void save_model(const std::string& path, const ModelBundle& model) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kModelFormatVersion);
  w.str(task_name(model.task));
  w.i64(model.cutoff.time_since_epoch().count());
  w.i32(model.horizons);
  w.str(model.broadness_source);

  w.i32(model.network.per_paper_units);
  w.i32(model.network.hidden_units);
  w.i32(model.network.output_units);
  w.u64(model.network.seed);

  w.i32(model.features.max_papers);
  write_strings(w, model.features.category_vocabulary);
  w.u8(model.features.include_topic_vectors ? 1 : 0);
  w.u8(model.features.include_broadness ? 1 : 0);
  write_strings(w, model.features.disabled);

  w.u64(model.manifest.size());
  for (const auto& ch : model.manifest) {
    w.str(ch.name);
    w.str(ch.group);
    w.u8(ch.normalized ? 1 : 0);
  }

  const auto& n = model.normalizer;
  write_stats(w, n.mean, n.stddev, n.normalized);
  write_stats(w, n.author_mean, n.author_stddev, n.author_normalized);
  write_strings(w, n.degenerate);

  const auto& s = model.params.shape;
  for (auto v : {s.channels, s.author_inputs, s.per_paper_units, s.hidden_units, s.output_units}) w.u64(v);
  w.u64(model.params.values.size());
  for (double v : model.params.values) w.f64(v);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file '" + path + "'");
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw IoError("failed writing model file '" + path + "'");
}

ModelBundle load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(data), path);
  r.expect(kMagic, sizeof kMagic, "not a citecast model file");
  auto version = r.u32();
  if (version != kModelFormatVersion) r.fail("unsupported model format version " + std::to_string(version));

  ModelBundle m;
  try {
    m.task = parse_task(r.str());
  } catch (const ArgumentError& e) {
    r.fail(e.what());
  }
  m.cutoff = Date{std::chrono::days{r.i64()}};
  m.horizons = r.i32();
  m.broadness_source = r.str();

  m.network.per_paper_units = r.i32();
  m.network.hidden_units = r.i32();
  m.network.output_units = r.i32();
  m.network.seed = r.u64();

  m.features.max_papers = r.i32();
  m.features.category_vocabulary = read_strings(r);
  m.features.include_topic_vectors = r.flag();
  m.features.include_broadness = r.flag();
  m.features.disabled = read_strings(r);

  m.manifest.resize(r.count(9));
  for (auto& ch : m.manifest) {
    ch.name = r.str();
    ch.group = r.str();
    ch.normalized = r.flag();
  }

  auto& n = m.normalizer;
  read_stats(r, n.mean, n.stddev, n.normalized);
  read_stats(r, n.author_mean, n.author_stddev, n.author_normalized);
  n.degenerate = read_strings(r);

  NetworkShape shape;
  shape.channels = r.u64();
  shape.author_inputs = r.u64();
  shape.per_paper_units = r.u64();
  shape.hidden_units = r.u64();
  shape.output_units = r.u64();
  auto count = r.count(8);
  if (count != shape.size()) r.fail("weight count does not match the network shape");
  m.params = NetworkParams(shape);
  for (auto& v : m.params.values) v = r.f64();
  if (!r.done()) r.fail("trailing bytes after weights");

  try {
    m.network.validate();
    m.features.validate();
  } catch (const ArgumentError& e) {
    r.fail(e.what());
  }
  auto expected = channel_manifest(m.features);
  bool manifest_ok = expected.size() == m.manifest.size();
  for (std::size_t i = 0; manifest_ok && i < expected.size(); ++i) manifest_ok = expected[i].name == m.manifest[i].name;
  if (!manifest_ok) r.fail("channel manifest does not match the feature configuration");
  if (shape.channels != m.manifest.size() || n.mean.size() != m.manifest.size() ||
      shape.output_units != static_cast<std::size_t>(m.network.output_units) ||
      shape.author_inputs != n.author_mean.size()) {
    r.fail("inconsistent dimensions");
  }
  return m;
}

}  // namespace citecast
