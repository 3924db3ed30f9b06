#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "vaep/csv.hpp"
#include "vaep/errors.hpp"
#include "vaep/model.hpp"

static_assert(std::endian::native == std::endian::little, "model files are written little-endian");

namespace vaep {
namespace {

constexpr char kMagic[8] = {'V', 'A', 'E', 'P', 'M', 'O', 'D', 'L'};

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  template <class T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    bytes_.append(buf, sizeof(T));
  }
  void put_doubles(const std::vector<double>& v) {
    put<std::uint64_t>(v.size());
    for (double d : v) put(d);
  }
  void put_bytes(std::string_view s) {
    put<std::uint64_t>(s.size());
    bytes_.append(s);
  }
  std::string& bytes() { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::vector<double> get_doubles() {
    const auto n = get<std::uint64_t>();
    if (n > remaining() / sizeof(double)) throw errors::corrupt_file("array length exceeds file size");
    std::vector<double> v(n);
    for (auto& d : v) d = get<double>();
    return v;
  }
  std::string_view get_bytes() {
    const auto n = get<std::uint64_t>();
    need(n);
    const auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (n > remaining()) throw errors::corrupt_file("truncated model file");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

nlohmann::json header_for(const Model& m) {
  nlohmann::json h;
  h["format"] = "vaep-model";
  h["target"] = to_string(m.target);
  h["learner"] = to_string(m.kind());
  h["window"] = m.schema().window();
  h["schema"] = m.schema().names();
  if (const auto* lr = std::get_if<LogisticModel>(&m.learner)) {
    h["params"] = {{"l2", lr->params.l2},
                   {"max_epochs", lr->params.max_epochs},
                   {"tol", lr->params.tol},
                   {"seed", lr->params.seed}};
    h["training"] = {{"epochs_run", lr->epochs_run}};
  } else {
    const auto& f = std::get<ForestModel>(m.learner);
    h["params"] = {{"n_trees", f.params.n_trees},
                   {"max_depth", f.params.max_depth},
                   {"min_leaf", f.params.min_leaf},
                   {"features_per_split", f.params.features_per_split},
                   {"n_bins", f.params.n_bins},
                   {"bootstrap", f.params.bootstrap},
                   {"seed", f.params.seed}};
  }
  return h;
}

std::string payload_for(const Model& m) {
  Writer w;
  if (const auto* lr = std::get_if<LogisticModel>(&m.learner)) {
    w.put_doubles(lr->weights);
    w.put_doubles(lr->mean);
    w.put_doubles(lr->scale);
    w.put(lr->bias);
    w.put_doubles(lr->loss_history);
  } else {
    const auto& f = std::get<ForestModel>(m.learner);
    w.put<std::uint64_t>(f.trees.size());
    for (const auto& t : f.trees) {
      w.put<std::uint64_t>(t.nodes.size());
      for (const auto& n : t.nodes) {
        w.put(n.feature);
        w.put(n.left);
        w.put(n.right);
        w.put(n.threshold);
        w.put(n.value);
        w.put(n.weight);
      }
    }
  }
  return std::move(w.bytes());
}

LogisticModel read_logistic(Reader& r, const FeatureSchema& schema, const nlohmann::json& h) {
  LogisticModel m;
  m.schema = schema;
  const auto& p = h.at("params");
  m.params.l2 = p.at("l2").get<double>();
  m.params.max_epochs = p.at("max_epochs").get<int>();
  m.params.tol = p.at("tol").get<double>();
  m.params.seed = p.at("seed").get<std::uint64_t>();
  m.epochs_run = h.at("training").at("epochs_run").get<int>();
  m.weights = r.get_doubles();
  m.mean = r.get_doubles();
  m.scale = r.get_doubles();
  m.bias = r.get<double>();
  m.loss_history = r.get_doubles();
  const auto d = schema.size();
  if (m.weights.size() != d || m.mean.size() != d || m.scale.size() != d)
    throw errors::corrupt_file("logistic weights do not match the schema length");
  return m;
}

ForestModel read_forest(Reader& r, const FeatureSchema& schema, const nlohmann::json& h) {
  ForestModel m;
  m.schema = schema;
  const auto& p = h.at("params");
  m.params.n_trees = p.at("n_trees").get<int>();
  m.params.max_depth = p.at("max_depth").get<int>();
  m.params.min_leaf = p.at("min_leaf").get<double>();
  m.params.features_per_split = p.at("features_per_split").get<int>();
  m.params.n_bins = p.at("n_bins").get<int>();
  m.params.bootstrap = p.at("bootstrap").get<bool>();
  m.params.seed = p.at("seed").get<std::uint64_t>();
  constexpr std::size_t node_bytes = 3 * sizeof(std::int32_t) + 3 * sizeof(double);
  const auto n_trees = r.get<std::uint64_t>();
  if (n_trees == 0 || n_trees > r.remaining()) throw errors::corrupt_file("bad tree count");
  for (std::uint64_t t = 0; t < n_trees; ++t) {
    const auto n_nodes = r.get<std::uint64_t>();
    if (n_nodes == 0 || n_nodes > r.remaining() / node_bytes) throw errors::corrupt_file("bad node count");
    Tree tree;
    tree.nodes.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      auto& n = tree.nodes[i];
      n.feature = r.get<std::int32_t>();
      n.left = r.get<std::int32_t>();
      n.right = r.get<std::int32_t>();
      n.threshold = r.get<double>();
      n.value = r.get<double>();
      n.weight = r.get<double>();
      // Nodes are stored in pre-order, so children always follow their parent.
      const bool leaf_ok = n.feature == -1 && n.value > 0.0 && n.value < 1.0;
      const bool split_ok = n.feature >= 0 && std::size_t(n.feature) < schema.size() && n.left > std::int32_t(i) &&
                            n.right > std::int32_t(i) && std::uint64_t(n.left) < n_nodes &&
                            std::uint64_t(n.right) < n_nodes;
      if (!leaf_ok && !split_ok) throw errors::corrupt_file("malformed tree node");
    }
    m.trees.push_back(std::move(tree));
  }
  if (m.trees.size() != std::size_t(m.params.n_trees)) throw errors::corrupt_file("tree count disagrees with header");
  return m;
}

}  // namespace

void save_model(const Model& m, std::ostream& out) {
  Writer w;
  w.bytes().append(kMagic, sizeof(kMagic));
  w.put<std::uint32_t>(kModelFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(m.kind()));
  w.put<std::uint64_t>(m.schema().hash());
  w.put_bytes(header_for(m).dump());
  w.put_bytes(payload_for(m));
  w.put<std::uint64_t>(fnv1a(w.bytes()));
  out.write(w.bytes().data(), std::streamsize(w.bytes().size()));
}

void save_model(const Model& m, const std::filesystem::path& path) {
  io::write_atomic(path, [&](std::ostream& out) { save_model(m, out); });
}

Model load_model(std::istream& in) {
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  constexpr std::size_t fixed = sizeof(kMagic) + 4 + 4 + 8;
  if (bytes.size() < fixed + 8) throw errors::corrupt_file("truncated model file");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) throw errors::corrupt_file("not a model file");

  Reader r(bytes);
  r.get<std::uint64_t>();  // magic
  const auto version = r.get<std::uint32_t>();
  if (version > kModelFormatVersion) throw errors::version_mismatch(version, kModelFormatVersion);
  if (version == 0) throw errors::corrupt_file("invalid format version 0");

  const std::string_view body(bytes.data(), bytes.size() - 8);
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + body.size(), 8);
  if (fnv1a(body) != stored) throw errors::corrupt_file("checksum mismatch");

  const auto kind = r.get<std::uint32_t>();
  const auto hash = r.get<std::uint64_t>();
  Reader body_reader(body);
  for (std::size_t i = 0; i < fixed; ++i) body_reader.get<char>();
  try {
    const auto header = nlohmann::json::parse(body_reader.get_bytes());
    const auto schema = FeatureSchema::from_names(header.at("schema").get<std::vector<std::string>>());
    if (schema.hash() != hash) throw errors::corrupt_file("schema hash does not match the stored columns");
    Model m;
    m.target = parse_target(header.at("target").get<std::string>());
    Reader payload(body_reader.get_bytes());
    if (kind == std::uint32_t(LearnerKind::logistic)) {
      m.learner = read_logistic(payload, schema, header);
    } else if (kind == std::uint32_t(LearnerKind::forest)) {
      m.learner = read_forest(payload, schema, header);
    } else {
      throw errors::corrupt_file("unknown learner kind " + std::to_string(kind));
    }
    if (payload.remaining() != 0 || body_reader.remaining() != 0) throw errors::corrupt_file("trailing bytes");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw errors::corrupt_file(std::string("bad header: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == "CorruptFile") throw;
    throw errors::corrupt_file(e.what());
  }
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw errors::missing_file(path.string());
  return load_model(in);
}

}  // namespace vaep
