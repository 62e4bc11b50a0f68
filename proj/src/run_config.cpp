#include "citecast/run_config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "citecast/errors.hpp"
#include "citecast/format.hpp"

namespace citecast {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ArgumentError("invalid value '" + std::string(value) + "' for " + std::string(key) + ": expected " + expected);
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  std::string s(value);
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  bad_value(key, value, "a number");
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "true or false");
}

std::vector<std::string> parse_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto comma = value.find(',', start);
    auto item = trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

struct Field {
  const char* name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <auto Member>
Field text_field(const char* name) {
  return {name, [](RunConfig& c, std::string_view v) { c.*Member = std::string(v); },
          [](const RunConfig& c) { return c.*Member; }};
}

template <auto Member>
Field int_field(const char* name) {
  return {name,
          [name](RunConfig& c, std::string_view v) {
            c.*Member = parse_integer<std::remove_reference_t<decltype(c.*Member)>>(name, v);
          },
          [](const RunConfig& c) { return std::to_string(c.*Member); }};
}

template <auto Member>
Field real_field(const char* name) {
  return {name, [name](RunConfig& c, std::string_view v) { c.*Member = parse_real(name, v); },
          [](const RunConfig& c) { return format_number(c.*Member); }};
}

template <auto Member>
Field list_field(const char* name) {
  return {name, [](RunConfig& c, std::string_view v) { c.*Member = parse_list(v); },
          [](const RunConfig& c) { return join(c.*Member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = {
      text_field<&RunConfig::papers>("papers"),
      text_field<&RunConfig::citations>("citations"),
      text_field<&RunConfig::jif>("jif"),
      text_field<&RunConfig::translation>("translation"),
      text_field<&RunConfig::broadness>("broadness"),
      text_field<&RunConfig::out>("out"),
      text_field<&RunConfig::model>("model"),
      int_field<&RunConfig::synth_authors>("synth_authors"),
      int_field<&RunConfig::synth_papers>("synth_papers"),
      text_field<&RunConfig::cutoff>("cutoff"),
      text_field<&RunConfig::window_start>("window_start"),
      text_field<&RunConfig::window_end>("window_end"),
      int_field<&RunConfig::min_papers>("min_papers"),
      int_field<&RunConfig::max_papers>("max_papers"),
      int_field<&RunConfig::max_authors_per_paper>("max_authors_per_paper"),
      text_field<&RunConfig::task>("task"),
      int_field<&RunConfig::horizons>("horizons"),
      text_field<&RunConfig::nc_reading>("nc_reading"),
      list_field<&RunConfig::disabled_channels>("disabled_channels"),
      text_field<&RunConfig::include_topic_vectors>("include_topic_vectors"),
      {"include_broadness", [](RunConfig& c, std::string_view v) { c.include_broadness = parse_bool("include_broadness", v); },
       [](const RunConfig& c) { return std::string(c.include_broadness ? "true" : "false"); }},
      int_field<&RunConfig::per_paper_units>("per_paper_units"),
      int_field<&RunConfig::hidden_units>("hidden_units"),
      int_field<&RunConfig::epochs>("epochs"),
      int_field<&RunConfig::batch_size>("batch_size"),
      real_field<&RunConfig::learning_rate>("learning_rate"),
      real_field<&RunConfig::beta1>("beta1"),
      real_field<&RunConfig::beta2>("beta2"),
      real_field<&RunConfig::epsilon>("epsilon"),
      int_field<&RunConfig::rounds>("rounds"),
      int_field<&RunConfig::train_count>("train_count"),
      int_field<&RunConfig::seed>("seed"),
      int_field<&RunConfig::jobs>("jobs"),
      list_field<&RunConfig::predictors>("predictors"),
      real_field<&RunConfig::enet_alpha>("enet_alpha"),
      int_field<&RunConfig::enet_folds>("enet_folds"),
      {"epoch_checkpoints",
       [](RunConfig& c, std::string_view v) {
         c.epoch_checkpoints.clear();
         for (const auto& item : parse_list(v)) c.epoch_checkpoints.push_back(parse_integer<int>("epoch_checkpoints", item));
       },
       [](const RunConfig& c) {
         std::vector<std::string> items;
         for (int e : c.epoch_checkpoints) items.push_back(std::to_string(e));
         return join(items);
       }},
      list_field<&RunConfig::ablate>("ablate"),
      int_field<&RunConfig::t1_years>("t1_years"),
      int_field<&RunConfig::t2_years>("t2_years"),
      text_field<&RunConfig::author>("author"),
  };
  return all;
}

const Field& field(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.name) return f;
  }
  throw ArgumentError("unknown configuration key '" + std::string(key) + "'");
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) { field(trim(key)).set(*this, trim(value)); }

std::string RunConfig::get(std::string_view key) const { return field(key).get(*this); }

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.name);
  return out;
}

void RunConfig::apply_text(std::string_view text, const std::string& source) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key = value");
    try {
      set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ArgumentError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

void RunConfig::apply_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_text(buf.str(), path);
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.name) + " = " + f.get(*this) + "\n";
  return out;
}

std::string RunConfig::model_path() const {
  return model.empty() ? (std::filesystem::path(out) / "model.bin").string() : model;
}

std::pair<std::string, std::string> split_assignment(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ArgumentError("expected key=value, got '" + std::string(text) + "'");
  return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

}  // namespace citecast
