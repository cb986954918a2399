// Native implementation of the C inference surface.
//
// This is a self-contained reimplementation of package validation and
// centroid inference: it shares no code with the Python package, which is
// exactly what makes the cross-checking tests meaningful. Numerics follow
// the same fixed recipe (u8 -> float32/255 -> float64 accumulation) so
// results agree with the reference implementation to ~1e-15.

#include "odr_centroid.h"

#include <openssl/evp.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#if defined(__has_include)
#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif
#else
#include <nlohmann/json.hpp>
#endif

using json = nlohmann::json;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string &msg) { g_last_error = msg; }

struct Model {
  uint32_t classes = 0;
  uint32_t dim = 0;
  std::vector<double> centroids;  // classes x dim, row-major
  std::vector<std::string> names;
  double temperature = 1.0;
  std::mutex lock;  // serializes concurrent use of one handle
};

constexpr uint64_t kMaxHandles = 1u << 20;

std::mutex g_table_lock;
std::unordered_map<uint64_t, std::shared_ptr<Model>> g_table;
uint64_t g_next_handle = 1;  // handles are never reused

bool read_file(const std::string &path, std::vector<unsigned char> &out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  out.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  return true;
}

std::string sha256_hex(const std::vector<unsigned char> &data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    return "";
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

uint32_t read_u32_le(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

double read_f64_le(const unsigned char *p) {
  uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = bits << 8 | p[i];
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

bool path_is_sane(const std::string &rel) {
  if (rel.empty() || rel.front() == '/' || rel.find('\\') != std::string::npos)
    return false;
  return rel.find("..") == std::string::npos;
}

OdrStatus load_model(const std::string &root, std::shared_ptr<Model> &out) {
  std::vector<unsigned char> manifest_raw;
  if (!read_file(root + "/manifest.json", manifest_raw)) {
    set_error("package not found: no manifest.json under " + root);
    return ODR_NOT_FOUND;
  }

  json manifest;
  try {
    manifest = json::parse(manifest_raw.begin(), manifest_raw.end());
  } catch (const std::exception &e) {
    set_error(std::string("manifest.json is not valid JSON: ") + e.what());
    return ODR_BAD_PACKAGE;
  }

  try {
    if (manifest.value("schema_version", 1) != 1) {
      set_error("unsupported manifest schema_version");
      return ODR_BAD_PACKAGE;
    }
    if (manifest.value("model_format", "") != "native") {
      set_error("centroid models require model_format 'native'");
      return ODR_BAD_PACKAGE;
    }
    if (!manifest.contains("model_paths") || !manifest["model_paths"].is_array() ||
        manifest["model_paths"].empty()) {
      set_error("manifest has no model_paths");
      return ODR_BAD_PACKAGE;
    }

    // every payload must hash to its recorded checksum
    std::vector<unsigned char> payload;
    const auto &paths = manifest["model_paths"];
    for (size_t i = 0; i < paths.size(); ++i) {
      const std::string rel = paths[i].get<std::string>();
      if (!path_is_sane(rel)) {
        set_error("illegal payload path: " + rel);
        return ODR_BAD_PACKAGE;
      }
      std::vector<unsigned char> blob;
      if (!read_file(root + "/" + rel, blob)) {
        set_error("payload missing: " + rel);
        return ODR_BAD_PACKAGE;
      }
      const auto &sums = manifest["checksums"];
      if (!sums.contains(rel) || !sums[rel].is_string()) {
        set_error("no checksum recorded for " + rel);
        return ODR_BAD_PACKAGE;
      }
      if (sha256_hex(blob) != sums[rel].get<std::string>()) {
        set_error("checksum mismatch in " + rel);
        return ODR_BAD_PACKAGE;
      }
      if (i == 0) payload = std::move(blob);
    }

    if (payload.size() < 12 || std::memcmp(payload.data(), "ODRC", 4) != 0) {
      set_error("payload is not a centroid model (bad magic)");
      return ODR_BAD_PACKAGE;
    }
    const uint32_t classes = read_u32_le(payload.data() + 4);
    const uint32_t dim = read_u32_le(payload.data() + 8);
    const uint64_t expected = 12ull + 8ull * classes * dim;
    if (classes == 0 || dim == 0 || payload.size() != expected) {
      set_error("centroid payload has inconsistent dimensions");
      return ODR_BAD_PACKAGE;
    }

    auto model = std::make_shared<Model>();
    model->classes = classes;
    model->dim = dim;
    model->centroids.resize(static_cast<size_t>(classes) * dim);
    for (size_t i = 0; i < model->centroids.size(); ++i)
      model->centroids[i] = read_f64_le(payload.data() + 12 + 8 * i);

    if (manifest.contains("classes") && manifest["classes"].is_array() &&
        manifest["classes"].size() == classes) {
      for (const auto &name : manifest["classes"])
        model->names.push_back(name.get<std::string>());
    } else {
      for (uint32_t i = 0; i < classes; ++i)
        model->names.push_back(std::to_string(i));
    }

    if (manifest.contains("inference_params") &&
        manifest["inference_params"].contains("temperature")) {
      model->temperature = manifest["inference_params"]["temperature"].get<double>();
      if (!(model->temperature > 0)) {
        set_error("temperature must be > 0");
        return ODR_BAD_PACKAGE;
      }
    }

    out = std::move(model);
    return ODR_OK;
  } catch (const std::exception &e) {
    set_error(std::string("malformed manifest: ") + e.what());
    return ODR_BAD_PACKAGE;
  }
}

// canonicalize the described buffer to CHW/RGB/U8, then to float64 via
// float32 division by 255 (the reference pipeline's exact recipe)
OdrStatus canonicalize(const OdrImageDesc &desc, std::vector<double> &out) {
  if (desc.data == nullptr || desc.width == 0 || desc.height == 0) {
    set_error("image descriptor has no data or zero dimensions");
    return ODR_BAD_INPUT;
  }
  if (desc.channels != 1 && desc.channels != 3) {
    set_error("channels must be 1 or 3");
    return ODR_BAD_INPUT;
  }
  if (desc.layout > 1 || desc.channel_order > 1 || desc.dtype > 1) {
    set_error("unknown layout/order/dtype code");
    return ODR_BAD_INPUT;
  }
  const uint64_t count =
      static_cast<uint64_t>(desc.channels) * desc.width * desc.height;
  const uint64_t sample = desc.dtype == ODR_DTYPE_F32 ? 4 : 1;
  if (desc.len != count * sample) {
    set_error("buffer length does not match channels*height*width");
    return ODR_BAD_INPUT;
  }

  std::vector<uint8_t> flat(count);
  if (desc.dtype == ODR_DTYPE_U8) {
    std::memcpy(flat.data(), desc.data, count);
  } else {
    const auto *f = static_cast<const float *>(desc.data);
    for (uint64_t i = 0; i < count; ++i) {
      const float v = f[i];
      if (!(v >= 0.0f && v <= 1.0f)) {  // NaN fails too
        set_error("F32 samples must lie in [0, 1]");
        return ODR_BAD_INPUT;
      }
      flat[i] = static_cast<uint8_t>(
          std::floor(static_cast<double>(v) * 255.0 + 0.5));
    }
  }

  const uint64_t hw = static_cast<uint64_t>(desc.width) * desc.height;
  std::vector<uint8_t> chw(count);
  if (desc.layout == ODR_LAYOUT_HWC) {
    for (uint64_t px = 0; px < hw; ++px)
      for (uint32_t c = 0; c < desc.channels; ++c)
        chw[static_cast<uint64_t>(c) * hw + px] = flat[px * desc.channels + c];
  } else {
    chw = std::move(flat);
  }
  if (desc.channel_order == ODR_ORDER_BGR && desc.channels == 3)
    for (uint64_t px = 0; px < hw; ++px)
      std::swap(chw[px], chw[2 * hw + px]);

  out.resize(count);
  for (uint64_t i = 0; i < count; ++i)
    out[i] = static_cast<double>(static_cast<float>(chw[i]) / 255.0f);
  return ODR_OK;
}

}  // namespace

extern "C" {

OdrStatus odr_load_centroid(const char *package_path_utf8, uint64_t *out_handle) {
  try {
    if (package_path_utf8 == nullptr || out_handle == nullptr) {
      set_error("null argument");
      return ODR_BAD_INPUT;
    }
    std::shared_ptr<Model> model;
    const OdrStatus status = load_model(package_path_utf8, model);
    if (status != ODR_OK) return status;

    std::lock_guard<std::mutex> guard(g_table_lock);
    if (g_table.size() >= kMaxHandles) {
      set_error("too many live handles");
      return ODR_CAPACITY;
    }
    const uint64_t handle = g_next_handle++;
    g_table.emplace(handle, std::move(model));
    *out_handle = handle;
    return ODR_OK;
  } catch (const std::exception &e) {
    set_error(std::string("internal error: ") + e.what());
    return ODR_INTERNAL;
  } catch (...) {
    set_error("internal error");
    return ODR_INTERNAL;
  }
}

OdrStatus odr_infer_centroid(uint64_t handle, const OdrImageDesc *image,
                             OdrCategoryOut *out) {
  try {
    if (image == nullptr || out == nullptr) {
      set_error("null argument");
      return ODR_BAD_INPUT;
    }
    std::shared_ptr<Model> model;
    {
      std::lock_guard<std::mutex> guard(g_table_lock);
      auto it = g_table.find(handle);
      if (it == g_table.end()) {
        set_error("unknown or freed handle");
        return ODR_BAD_HANDLE;
      }
      model = it->second;
    }

    std::vector<double> x;
    const OdrStatus status = canonicalize(*image, x);
    if (status != ODR_OK) return status;
    if (x.size() != model->dim) {
      set_error("input dimension does not match the model");
      return ODR_BAD_INPUT;
    }

    std::lock_guard<std::mutex> guard(model->lock);
    std::vector<double> dist2(model->classes);
    for (uint32_t c = 0; c < model->classes; ++c) {
      const double *row = model->centroids.data() + static_cast<size_t>(c) * model->dim;
      double acc = 0.0;
      for (uint32_t i = 0; i < model->dim; ++i) {
        const double d = x[i] - row[i];
        acc += d * d;
      }
      dist2[c] = acc;
    }
    uint32_t winner = 0;
    for (uint32_t c = 1; c < model->classes; ++c)
      if (dist2[c] < dist2[winner]) winner = c;  // ties keep the lowest index

    double denom = 0.0;
    for (uint32_t c = 0; c < model->classes; ++c)
      denom += std::exp((dist2[winner] - dist2[c]) / model->temperature);

    out->index = winner;
    out->reserved = 0;
    out->confidence = 1.0 / denom;
    std::snprintf(out->description, ODR_DESCRIPTION_CAP, "%s",
                  model->names[winner].c_str());
    return ODR_OK;
  } catch (const std::exception &e) {
    set_error(std::string("internal error: ") + e.what());
    return ODR_INTERNAL;
  } catch (...) {
    set_error("internal error");
    return ODR_INTERNAL;
  }
}

OdrStatus odr_free(uint64_t handle) {
  try {
    std::lock_guard<std::mutex> guard(g_table_lock);
    if (g_table.erase(handle) == 0) {
      set_error("unknown or freed handle");
      return ODR_BAD_HANDLE;
    }
    return ODR_OK;
  } catch (...) {
    set_error("internal error");
    return ODR_INTERNAL;
  }
}

OdrStatus odr_last_error(char *buffer, uint64_t capacity) {
  try {
    if (buffer == nullptr || capacity == 0) return ODR_BAD_INPUT;
    std::snprintf(buffer, capacity, "%s", g_last_error.c_str());
    return ODR_OK;
  } catch (...) {
    return ODR_INTERNAL;
  }
}

}  // extern "C"
