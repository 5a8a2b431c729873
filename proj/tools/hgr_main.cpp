// Command-line front end for hierarchical grid refactoring: decompose raw
// volumes into progressive .hg files, reconstruct prefixes, inspect files,
// compare volumes, and rank kernel launch configurations.

#include <CLI11.hpp>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "hgr/hgr.hpp"

using nlohmann::json;

namespace {

std::vector<char> read_file_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  hgr::detail::require(bool(is), path + ": cannot open");
  std::vector<char> bytes{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  return bytes;
}

template <class T>
std::vector<T> read_raw(const std::string& path, std::size_t expect_elements) {
  const auto bytes = read_file_bytes(path);
  hgr::detail::require(bytes.size() == expect_elements * sizeof(T),
                       path + ": file holds " + std::to_string(bytes.size()) +
                           " bytes but the given dims need " +
                           std::to_string(expect_elements * sizeof(T)));
  std::vector<T> values(expect_elements);
  std::memcpy(values.data(), bytes.data(), bytes.size());
  return values;
}

template <class T>
void write_raw(const std::string& path, const std::vector<T>& values) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  hgr::detail::require(bool(os), path + ": cannot open for writing");
  os.write(reinterpret_cast<const char*>(values.data()),
           static_cast<std::streamsize>(values.size() * sizeof(T)));
  os.flush();
  hgr::detail::require(bool(os), path + ": write failed");
}

std::vector<double> read_coords_file(const std::string& path) {
  std::ifstream is(path);
  hgr::detail::require(bool(is), path + ": cannot open");
  std::vector<double> coords;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    coords.push_back(std::stod(line));
  }
  return coords;
}

hgr::GridHierarchy make_hierarchy(const std::vector<std::size_t>& dims,
                                  const std::vector<std::string>& coords_files) {
  if (coords_files.empty()) return hgr::GridHierarchy::uniform(dims);
  hgr::detail::require(coords_files.size() == dims.size(),
                       "need one --coords-file per dimension");
  std::vector<std::vector<double>> coords;
  for (const auto& f : coords_files) coords.push_back(read_coords_file(f));
  hgr::GridHierarchy g(std::move(coords));
  for (std::size_t d = 0; d < dims.size(); ++d)
    hgr::detail::require(g.finest_extent(static_cast<int>(d)) == dims[d],
                         coords_files[d] + ": coordinate count does not match --dims");
  return g;
}

struct DecomposeArgs {
  std::string input, output;
  std::vector<std::size_t> dims;
  std::string precision = "f64";
  std::vector<std::string> coords_files;
  bool uniform = false;
  bool as_json = false;
};

template <class T>
int run_decompose_typed(const DecomposeArgs& a) {
  const auto g = make_hierarchy(a.dims, a.coords_files);
  std::size_t total = 1;
  for (auto d : a.dims) total *= d;
  hgr::ndarray<T> data(g.finest_extents(), read_raw<T>(a.input, total));
  auto refactored = hgr::decompose(std::move(data), g);
  const auto bytes = hgr::write_file(refactored, a.output);
  const auto info = hgr::read_info(a.output);
  if (a.as_json) {
    json out{{"command", "decompose"},
             {"input", a.input},
             {"output", a.output},
             {"bytes", bytes},
             {"classes", info.class_count()}};
    for (int cls = 0; cls < info.class_count(); ++cls) {
      out["class_bytes"].push_back(info.classes[static_cast<std::size_t>(cls)].bytes);
      out["class_elements"].push_back(info.class_elements(cls));
    }
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "wrote " << a.output << " (" << bytes << " bytes)\n";
    std::cout << "classes: " << info.class_count() << "\n";
    for (int cls = 0; cls < info.class_count(); ++cls)
      std::cout << "  class " << cls << ": " << info.class_elements(cls) << " elements, "
                << info.classes[static_cast<std::size_t>(cls)].bytes << " bytes\n";
  }
  return 0;
}

struct RecomposeArgs {
  std::string input, output;
  int classes = -1;
  bool as_json = false;
};

template <class T>
int run_recompose_typed(const RecomposeArgs& a, const hgr::HgFileHeader& header) {
  auto read = hgr::read_prefix<T>(a.input, a.classes);
  auto values = hgr::recompose(read.array, a.classes);
  write_raw<T>(a.output, values.values());
  if (a.as_json) {
    json out{{"command", "recompose"}, {"input", a.input},
             {"output", a.output},     {"classes_used", a.classes},
             {"bytes_read", read.bytes_read}, {"file_bytes", header.file_bytes}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "reconstructed " << a.output << " from classes 0.." << a.classes << "\n";
    std::cout << "bytes read: " << read.bytes_read << " of " << header.file_bytes << " ("
              << 100.0 * double(read.bytes_read) / double(header.file_bytes) << "%)\n";
  }
  return 0;
}

int run_info(const std::string& input, bool as_json) {
  const auto h = hgr::read_info(input);
  if (as_json) {
    json out{{"command", "info"},
             {"input", input},
             {"version", h.version},
             {"precision_bytes", h.precision_bytes},
             {"dims", h.extents},
             {"classes", h.class_count()},
             {"header_bytes", h.header_bytes},
             {"file_bytes", h.file_bytes}};
    for (int cls = 0; cls < h.class_count(); ++cls) {
      out["class_bytes"].push_back(h.classes[static_cast<std::size_t>(cls)].bytes);
      out["class_elements"].push_back(h.class_elements(cls));
    }
    std::cout << out.dump() << "\n";
    return 0;
  }
  std::cout << input << ":\n  version " << h.version << ", "
            << (h.precision_bytes == 4 ? "f32" : "f64") << ", dims";
  for (auto e : h.extents) std::cout << " " << e;
  std::cout << "\n  " << h.class_count() << " classes, " << h.file_bytes << " bytes ("
            << h.header_bytes << " header)\n";
  const double total = static_cast<double>(h.total_elements());
  for (int cls = 0; cls < h.class_count(); ++cls)
    std::cout << "  class " << cls << ": " << h.class_elements(cls) << " elements ("
              << 100.0 * double(h.class_elements(cls)) / total << "% of volume), "
              << h.classes[static_cast<std::size_t>(cls)].bytes << " bytes\n";
  return 0;
}

template <class T>
int run_error_typed(const std::string& original, const std::string& reconstruction,
                    bool as_json) {
  const auto a_bytes = read_file_bytes(original);
  const auto b_bytes = read_file_bytes(reconstruction);
  hgr::detail::require(a_bytes.size() == b_bytes.size(),
                       "error: input files differ in size");
  hgr::detail::require(a_bytes.size() % sizeof(T) == 0,
                       "error: file size is not a whole number of elements");
  const std::size_t n = a_bytes.size() / sizeof(T);
  std::vector<T> a(n), b(n);
  std::memcpy(a.data(), a_bytes.data(), a_bytes.size());
  std::memcpy(b.data(), b_bytes.data(), b_bytes.size());
  const auto rep = hgr::error_report(hgr::ndarray<T>({n}, std::move(a)),
                                     hgr::ndarray<T>({n}, std::move(b)));
  if (as_json) {
    json out{{"command", "error"},     {"original", original}, {"reconstruction", reconstruction},
             {"l2_abs", rep.l2_abs},   {"l2_rel", rep.l2_rel}, {"linf_abs", rep.linf_abs},
             {"linf_rel", rep.linf_rel}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "l2_abs   " << rep.l2_abs << "\n"
              << "l2_rel   " << rep.l2_rel << "\n"
              << "linf_abs " << rep.linf_abs << "\n"
              << "linf_rel " << rep.linf_rel << "\n";
  }
  return 0;
}

std::vector<hgr::KernelConfig> read_configs_file(const std::string& path) {
  std::ifstream is(path);
  hgr::detail::require(bool(is), path + ": cannot open");
  std::vector<hgr::KernelConfig> configs;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (auto& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    hgr::KernelConfig cfg;
    if (ss >> cfg.bx >> cfg.by >> cfg.bz) configs.push_back(cfg);
  }
  hgr::detail::require(!configs.empty(), path + ": no configurations found");
  return configs;
}

struct RankArgs {
  std::uint64_t n = 513;
  std::uint64_t element_bytes = 8;
  std::uint64_t transaction_bytes = 32;
  std::uint64_t ghost = 0;
  double peak_bw = 1.0;
  std::string kernel = "all";
  std::string configs_file;
  std::size_t top = 0;
  bool as_json = false;
};

int run_rank_configs(const RankArgs& a) {
  hgr::PerfParams p;
  p.n = a.n;
  p.element_bytes = a.element_bytes;
  p.transaction_bytes = a.transaction_bytes;
  p.ghost_elements = a.ghost;
  p.peak_bandwidth = a.peak_bw;
  std::vector<hgr::KernelConfig> configs(hgr::default_block_configs.begin(),
                                         hgr::default_block_configs.end());
  if (!a.configs_file.empty()) configs = read_configs_file(a.configs_file);

  std::vector<hgr::KernelKind> kinds;
  if (a.kernel == "all")
    kinds = {hgr::KernelKind::gpk, hgr::KernelKind::lpk, hgr::KernelKind::ipk};
  else if (a.kernel == "gpk")
    kinds = {hgr::KernelKind::gpk};
  else if (a.kernel == "lpk")
    kinds = {hgr::KernelKind::lpk};
  else if (a.kernel == "ipk")
    kinds = {hgr::KernelKind::ipk};
  else
    throw CLI::ValidationError("--kernel must be gpk, lpk, ipk, or all");

  json out{{"command", "rank-configs"}, {"n", p.n}};
  for (auto kind : kinds) {
    auto ranked = hgr::rank_configs(configs, kind, p);
    if (a.top > 0) {
      hgr::detail::require(a.top <= ranked.size(), "--top exceeds the configuration count");
      ranked.resize(a.top);
    }
    if (a.as_json) {
      json list = json::array();
      for (const auto& rc : ranked)
        list.push_back(json{{"bx", rc.config.bx},
                            {"by", rc.config.by},
                            {"bz", rc.config.bz},
                            {"rank", rc.rank},
                            {"seconds", rc.seconds}});
      out[hgr::kernel_name(kind)] = list;
    } else {
      std::cout << hgr::kernel_name(kind) << " (n=" << p.n << ", S=" << p.transaction_bytes
                << ", L=" << p.element_bytes << ", G=" << p.ghost() << ", bw=" << p.peak_bandwidth
                << "):\n";
      std::cout << "  rank    bx    by    bz        est. seconds\n";
      for (const auto& rc : ranked) {
        std::ostringstream row;
        row.setf(std::ios::scientific);
        row.precision(6);
        row << "  " << rc.rank << "\t" << rc.config.bx << "\t" << rc.config.by << "\t"
            << rc.config.bz << "\t" << rc.seconds;
        std::cout << row.str() << "\n";
      }
    }
  }
  if (a.as_json) std::cout << out.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical grid refactoring for structured scientific data"};
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* cmd_dec = app.add_subcommand("decompose", "refactor a raw volume into a .hg file");
  cmd_dec->add_option("--input", dec.input, "raw row-major volume")->required();
  cmd_dec->add_option("--dims", dec.dims, "per-dimension sizes, e.g. 33,33,33")
      ->required()
      ->delimiter(',');
  cmd_dec->add_option("--precision", dec.precision, "f32 or f64")
      ->check(CLI::IsMember({"f32", "f64"}));
  auto* coords_opt = cmd_dec->add_option("--coords-file", dec.coords_files,
                                         "per-dimension coordinate file, one value per line "
                                         "(repeat the flag once per dimension)");
  cmd_dec->add_flag("--uniform", dec.uniform, "use integer coordinates 0..n-1 (default)")
      ->excludes(coords_opt);
  cmd_dec->add_option("--output", dec.output, "output .hg path")->required();
  cmd_dec->add_flag("--json", dec.as_json, "emit a machine-readable JSON line");

  RecomposeArgs rec;
  auto* cmd_rec = app.add_subcommand("recompose", "reconstruct a raw volume from a class prefix");
  cmd_rec->add_option("--input", rec.input, ".hg file")->required();
  cmd_rec->add_option("--classes", rec.classes, "highest class index to use (0 = coarsest only)")
      ->required();
  cmd_rec->add_option("--output", rec.output, "raw output path")->required();
  cmd_rec->add_flag("--json", rec.as_json, "emit a machine-readable JSON line");

  std::string info_input;
  bool info_json = false;
  auto* cmd_info = app.add_subcommand("info", "summarize a .hg file without reading payloads");
  cmd_info->add_option("--input", info_input, ".hg file")->required();
  cmd_info->add_flag("--json", info_json, "emit a machine-readable JSON line");

  std::string err_original, err_recon, err_precision = "f64";
  bool err_json = false;
  auto* cmd_err = app.add_subcommand("error", "error norms between two raw volumes");
  cmd_err->add_option("--original", err_original, "reference raw volume")->required();
  cmd_err->add_option("--reconstruction", err_recon, "raw volume to compare")->required();
  cmd_err->add_option("--precision", err_precision, "f32 or f64")
      ->check(CLI::IsMember({"f32", "f64"}));
  cmd_err->add_flag("--json", err_json, "emit a machine-readable JSON line");

  RankArgs rank;
  auto* cmd_rank = app.add_subcommand("rank-configs", "rank kernel launch configurations "
                                                      "by modeled cost");
  cmd_rank->add_option("--n", rank.n, "per-dimension problem size");
  cmd_rank->add_option("--bytes-per-element", rank.element_bytes, "4 for f32, 8 for f64");
  cmd_rank->add_option("--transaction-bytes", rank.transaction_bytes,
                       "bytes per memory transaction");
  cmd_rank->add_option("--ghost", rank.ghost, "ghost-region elements (default: one transaction)");
  cmd_rank->add_option("--peak-bw", rank.peak_bw,
                       "peak memory bandwidth in bytes/s (ranks are bandwidth-invariant)");
  cmd_rank->add_option("--kernel", rank.kernel, "gpk, lpk, ipk, or all")
      ->check(CLI::IsMember({"gpk", "lpk", "ipk", "all"}));
  cmd_rank->add_option("--configs", rank.configs_file,
                       "file of candidate configs, one 'bx by bz' per line");
  cmd_rank->add_option("--top", rank.top, "print only the k best configurations");
  cmd_rank->add_flag("--json", rank.as_json, "emit a machine-readable JSON line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage error
  }

  try {
    if (*cmd_dec)
      return dec.precision == "f32" ? run_decompose_typed<float>(dec)
                                    : run_decompose_typed<double>(dec);
    if (*cmd_rec) {
      const auto header = hgr::read_info(rec.input);
      return header.precision_bytes == 4 ? run_recompose_typed<float>(rec, header)
                                         : run_recompose_typed<double>(rec, header);
    }
    if (*cmd_info) return run_info(info_input, info_json);
    if (*cmd_err)
      return err_precision == "f32" ? run_error_typed<float>(err_original, err_recon, err_json)
                                    : run_error_typed<double>(err_original, err_recon, err_json);
    if (*cmd_rank) return run_rank_configs(rank);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;  // data or format error
  }
  return 0;
}
