/*
 * Copyright 2026 The PhishStack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Model file layout (all integers little-endian):
//   "PSKM" magic | u32 format version | u64 dataset schema hash
//   then checksummed sections until EOF:
//     u32 tag | u64 payload size | payload bytes | u32 crc32(payload)
// Section tags: 1 = stack header, 2 = one base (mask + learner payload),
// 3 = meta network.

#include <filesystem>
#include <fstream>

#include "phishstack/errors.hpp"
#include "phishstack/runner.hpp"

namespace phishstack {

namespace {

constexpr char kMagic[4] = {'P', 'S', 'K', 'M'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kTagStackHeader = 1;
constexpr std::uint32_t kTagBase = 2;
constexpr std::uint32_t kTagMeta = 3;

void write_section(std::ofstream& out, std::uint32_t tag, const std::string& payload) {
  BinaryWriter header;
  header.u32(tag);
  header.u64(payload.size());
  out.write(header.buffer().data(), static_cast<std::streamsize>(header.buffer().size()));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  BinaryWriter footer;
  footer.u32(crc32(payload));
  out.write(footer.buffer().data(), static_cast<std::streamsize>(footer.buffer().size()));
}

void save_mlp_config(BinaryWriter& w, const MlpConfig& cfg) {
  w.str(cfg.topology_string());
  w.i32(cfg.max_epochs);
  w.i32(cfg.batch_size);
  w.f64(cfg.learning_rate);
  w.u64(cfg.seed);
  w.i32(cfg.early_stop_patience);
}

MlpConfig load_mlp_config(BinaryReader& r) {
  MlpConfig cfg;
  cfg.hidden_layers = MlpConfig::parse_topology(r.str());
  cfg.max_epochs = r.i32();
  cfg.batch_size = r.i32();
  cfg.learning_rate = r.f64();
  cfg.seed = r.u64();
  cfg.early_stop_patience = r.i32();
  return cfg;
}

struct Section {
  std::uint32_t tag;
  std::string payload;
};

std::vector<Section> read_sections(std::ifstream& in, const std::string& path) {
  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<Section> sections;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    if (rest.size() - pos < 12) {
      throw CorruptPayloadError(path + ": truncated section header");
    }
    BinaryReader head(rest.data() + pos, 12);
    const std::uint32_t tag = head.u32();
    const std::uint64_t size = head.u64();
    pos += 12;
    if (rest.size() - pos < size + 4) {
      throw CorruptPayloadError(path + ": truncated section payload");
    }
    std::string payload = rest.substr(pos, size);
    pos += size;
    BinaryReader foot(rest.data() + pos, 4);
    const std::uint32_t stored_crc = foot.u32();
    pos += 4;
    if (crc32(payload) != stored_crc) {
      throw CorruptPayloadError(path + ": section checksum mismatch (tag " +
                                std::to_string(tag) + ")");
    }
    sections.push_back({tag, std::move(payload)});
  }
  return sections;
}

}  // namespace

void save_model(const StackModel& model, std::uint64_t schema_hash, const std::string& path) {
  const std::filesystem::path fs_path(path);
  if (fs_path.has_parent_path()) {
    std::filesystem::create_directories(fs_path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open model file for writing: " + path);

  out.write(kMagic, 4);
  BinaryWriter prefix;
  prefix.u32(kFormatVersion);
  prefix.u64(schema_hash);
  out.write(prefix.buffer().data(), static_cast<std::streamsize>(prefix.buffer().size()));

  {
    BinaryWriter w;
    w.i32(model.k_inner);
    w.u64(model.seed);
    w.u64(model.n_features_full);
    w.u32(static_cast<std::uint32_t>(model.bases.size()));
    save_mlp_config(w, model.meta_config);
    write_section(out, kTagStackHeader, w.buffer());
  }
  for (std::size_t m = 0; m < model.bases.size(); ++m) {
    BinaryWriter w;
    w.vec_i32(model.bases[m].mask.selected);
    w.f64(model.bases[m].mask.cv_score_at_selection);
    model.fitted_bases[m].save(w);
    write_section(out, kTagBase, w.buffer());
  }
  {
    BinaryWriter w;
    model.meta.save(w);
    write_section(out, kTagMeta, w.buffer());
  }
  if (!out) throw IoError("write failed: " + path);
}

StackModel load_model(const std::string& path, std::uint64_t expected_schema_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);

  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw CorruptPayloadError(path + ": not a model file (bad magic)");
  }
  char prefix_bytes[12];
  in.read(prefix_bytes, 12);
  if (in.gcount() != 12) throw CorruptPayloadError(path + ": truncated prefix");
  BinaryReader prefix(prefix_bytes, 12);
  const std::uint32_t version = prefix.u32();
  if (version != kFormatVersion) {
    throw VersionMismatchError(path + ": format version " + std::to_string(version) +
                               ", expected " + std::to_string(kFormatVersion));
  }
  const std::uint64_t schema_hash = prefix.u64();
  if (schema_hash != expected_schema_hash) {
    throw SchemaHashMismatchError(path + ": model was saved against a different dataset schema");
  }

  const std::vector<Section> sections = read_sections(in, path);
  StackModel model;
  bool have_header = false, have_meta = false;
  std::uint32_t expected_bases = 0;
  for (const Section& s : sections) {
    BinaryReader r(s.payload);
    if (s.tag == kTagStackHeader) {
      model.k_inner = r.i32();
      model.seed = r.u64();
      model.n_features_full = r.u64();
      expected_bases = r.u32();
      model.meta_config = load_mlp_config(r);
      have_header = true;
    } else if (s.tag == kTagBase) {
      PoolMember member;
      member.mask.selected = r.vec_i32();
      member.mask.cv_score_at_selection = r.f64();
      TrainedLearner learner = TrainedLearner::load(r);
      member.spec = learner.spec();
      member.mask.learner_kind = member.spec.kind;
      model.bases.push_back(std::move(member));
      model.fitted_bases.push_back(std::move(learner));
    } else if (s.tag == kTagMeta) {
      model.meta = MlpModel::load(r);
      have_meta = true;
    } else {
      throw CorruptPayloadError(path + ": unknown section tag " + std::to_string(s.tag));
    }
  }
  if (!have_header || !have_meta || model.bases.empty() ||
      model.bases.size() != expected_bases) {
    throw CorruptPayloadError(path + ": incomplete model file");
  }
  return model;
}

std::uint64_t peek_model_schema_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  char bytes[16];
  in.read(bytes, 16);
  if (in.gcount() != 16 || std::memcmp(bytes, kMagic, 4) != 0) {
    throw CorruptPayloadError(path + ": not a model file");
  }
  BinaryReader r(bytes + 4, 12);
  r.u32();  // version
  return r.u64();
}

}  // namespace phishstack
