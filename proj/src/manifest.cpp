#include "ped/manifest.hpp"

#include <algorithm>

#include <json.hpp>

#include "parallel.hpp"
#include "ped/io.hpp"
#include "ped/rng.hpp"

namespace ped {

using nlohmann::json;

namespace {

json parse_json_file(const std::filesystem::path& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded())
        throw FormatError(path.string() + ": invalid JSON");
    return j;
}

CategoryKind kind_from_string(const std::string& s, const std::filesystem::path& path) {
    if (s == "stuff")
        return CategoryKind::Stuff;
    if (s == "instance")
        return CategoryKind::Instance;
    throw FormatError(path.string() + ": unknown category kind '" + s + "'");
}

json categories_to_json(const CategorySet& cats) {
    json arr = json::array();
    for (const Category& c : cats.list()) {
        arr.push_back({{"id", c.id},
                       {"name", c.name},
                       {"kind", c.kind == CategoryKind::Stuff ? "stuff" : "instance"}});
    }
    return arr;
}

CategorySet categories_from_json(const json& arr, const std::filesystem::path& path) {
    if (!arr.is_array() || arr.empty())
        throw FormatError(path.string() + ": categories must be a nonempty array");
    std::vector<Category> cats;
    for (const json& item : arr) {
        Category c;
        c.id = item.at("id").get<std::uint16_t>();
        c.name = item.at("name").get<std::string>();
        c.kind = kind_from_string(item.at("kind").get<std::string>(), path);
        cats.push_back(std::move(c));
    }
    return CategorySet(std::move(cats));
}

json box_to_json(const Box& b) {
    return json::array({b.x0, b.y0, b.x1, b.y1});
}

Box box_from_json(const json& j, const std::filesystem::path& path) {
    if (!j.is_array() || j.size() != 4)
        throw FormatError(path.string() + ": box must be [x0,y0,x1,y1]");
    Box b{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
    if (!b.valid())
        throw FormatError(path.string() + ": degenerate box");
    return b;
}

void require_exists(const std::filesystem::path& p, const std::filesystem::path& manifest) {
    if (!std::filesystem::exists(p))
        throw ManifestError(manifest.string() + ": referenced file missing: " + p.string());
}

// Binary PEDP payload -> boundary bits; any value other than 0/1 is a
// format violation for ground truth.
BoundaryMap to_boundary(const ProbMap& m, int channel, const std::filesystem::path& path) {
    BoundaryMap out(m.width, m.height);
    const float* plane = m.channel(channel);
    for (std::size_t i = 0; i < out.bits.size(); ++i) {
        const float v = plane[i];
        if (v != 0.0f && v != 1.0f)
            throw FormatError(path.string() + ": ground-truth map is not binary");
        out.bits[i] = (v == 1.0f) ? 1 : 0;
    }
    return out;
}

} // namespace

CategorySet read_categories_file(const std::filesystem::path& path) {
    return categories_from_json(parse_json_file(path), path);
}

DatasetManifest read_dataset_manifest(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    if (j.value("format", "") != "ped-gt-manifest")
        throw FormatError(path.string() + ": not a ground-truth manifest");
    DatasetManifest m;
    m.version = j.at("version").get<int>();
    m.radius = j.at("radius").get<int>();
    m.categories = categories_from_json(j.at("categories"), path);
    m.root = path.parent_path();

    std::vector<std::string> seen_ids;
    for (const json& ji : j.at("images")) {
        GtImageEntry e;
        e.id = ji.at("id").get<std::string>();
        e.width = ji.at("width").get<int>();
        e.height = ji.at("height").get<int>();
        e.semantic_path = ji.at("semantic").get<std::string>();
        e.semantic_crc32 = ji.value("semantic_crc32", "");
        require_exists(m.root / e.semantic_path, path);
        for (const json& jinst : ji.at("instances")) {
            GtInstanceEntry ie;
            ie.id = jinst.at("id").get<std::uint16_t>();
            ie.category = jinst.at("category").get<std::uint16_t>();
            ie.box = box_from_json(jinst.at("box"), path);
            ie.edges_path = jinst.at("edges").get<std::string>();
            ie.edges_crc32 = jinst.value("edges_crc32", "");
            require_exists(m.root / ie.edges_path, path);
            e.instances.push_back(std::move(ie));
        }
        seen_ids.push_back(e.id);
        m.images.push_back(std::move(e));
    }
    std::sort(seen_ids.begin(), seen_ids.end());
    if (std::adjacent_find(seen_ids.begin(), seen_ids.end()) != seen_ids.end())
        throw FormatError(path.string() + ": duplicate image ids");
    return m;
}

void write_dataset_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
    json j;
    j["format"] = "ped-gt-manifest";
    j["version"] = manifest.version;
    j["radius"] = manifest.radius;
    j["categories"] = categories_to_json(manifest.categories);
    json images = json::array();
    for (const GtImageEntry& e : manifest.images) {
        json ji;
        ji["id"] = e.id;
        ji["width"] = e.width;
        ji["height"] = e.height;
        ji["semantic"] = e.semantic_path;
        ji["semantic_crc32"] = e.semantic_crc32;
        json insts = json::array();
        for (const GtInstanceEntry& ie : e.instances) {
            insts.push_back({{"id", ie.id},
                             {"category", ie.category},
                             {"box", box_to_json(ie.box)},
                             {"edges", ie.edges_path},
                             {"edges_crc32", ie.edges_crc32}});
        }
        ji["instances"] = std::move(insts);
        images.push_back(std::move(ji));
    }
    j["images"] = std::move(images);
    write_file_atomic(path, j.dump(2) + "\n");
}

GtScene load_gt_scene(const DatasetManifest& manifest, const GtImageEntry& entry, bool strict) {
    const std::filesystem::path sem_path = manifest.root / entry.semantic_path;
    if (strict && !entry.semantic_crc32.empty() && file_crc32(sem_path) != entry.semantic_crc32)
        throw FormatError(sem_path.string() + ": checksum mismatch");
    const ProbMap sem = read_prob_map(sem_path, true);
    if (sem.channels != manifest.categories.size() || sem.width != entry.width
        || sem.height != entry.height)
        throw FormatError(sem_path.string() + ": semantic GT shape does not match manifest");

    GtScene scene;
    scene.semantic.reserve(static_cast<std::size_t>(sem.channels));
    for (int c = 0; c < sem.channels; ++c)
        scene.semantic.push_back(to_boundary(sem, c, sem_path));

    for (const GtInstanceEntry& ie : entry.instances) {
        const std::filesystem::path crop_path = manifest.root / ie.edges_path;
        if (strict && !ie.edges_crc32.empty() && file_crc32(crop_path) != ie.edges_crc32)
            throw FormatError(crop_path.string() + ": checksum mismatch");
        const ProbMap crop = read_prob_map(crop_path, true);
        if (crop.channels != 1 || crop.width != ie.box.width() || crop.height != ie.box.height())
            throw FormatError(crop_path.string() + ": instance crop shape does not match box");
        if (ie.box.x1 > entry.width || ie.box.y1 > entry.height || ie.box.x0 < 0 || ie.box.y0 < 0)
            throw FormatError(crop_path.string() + ": instance box outside canvas");
        if (manifest.categories.at(manifest.categories.index_of(ie.category)).kind
            != CategoryKind::Instance)
            throw ManifestError("instance " + std::to_string(ie.id)
                                + " has a stuff category id " + std::to_string(ie.category));
        GtInstance inst;
        inst.id = ie.id;
        inst.category = ie.category;
        inst.box = ie.box;
        inst.edges = BoundaryMap(entry.width, entry.height);
        const BoundaryMap bits = to_boundary(crop, 0, crop_path);
        for (int y = 0; y < bits.height; ++y)
            for (int x = 0; x < bits.width; ++x)
                if (bits.at(x, y))
                    inst.edges.set(ie.box.x0 + x, ie.box.y0 + y);
        scene.instances.push_back(std::move(inst));
    }
    return scene;
}

GtImageEntry save_gt_scene(const std::filesystem::path& out_root, const std::string& image_id,
                           const GtScene& scene, int width, int height) {
    GtImageEntry entry;
    entry.id = image_id;
    entry.width = width;
    entry.height = height;

    ProbMap sem(static_cast<int>(scene.semantic.size()), width, height);
    for (std::size_t c = 0; c < scene.semantic.size(); ++c) {
        if (scene.semantic[c].width != width || scene.semantic[c].height != height)
            throw ShapeError("save_gt_scene: semantic channel dimensions differ");
        float* plane = sem.channel(static_cast<int>(c));
        for (std::size_t i = 0; i < scene.semantic[c].bits.size(); ++i)
            plane[i] = scene.semantic[c].bits[i] ? 1.0f : 0.0f;
    }
    entry.semantic_path = image_id + "_sem.pedp";
    write_prob_map(out_root / entry.semantic_path, sem);
    entry.semantic_crc32 = file_crc32(out_root / entry.semantic_path);

    for (const GtInstance& inst : scene.instances) {
        if (inst.edges.empty())
            continue; // instance covering the whole canvas has no boundary
        GtInstanceEntry ie;
        ie.id = inst.id;
        ie.category = inst.category;
        ie.box = inst.box;
        ProbMap crop(1, inst.box.width(), inst.box.height());
        for (int y = 0; y < crop.height; ++y)
            for (int x = 0; x < crop.width; ++x)
                crop.at(0, x, y) = inst.edges.at(inst.box.x0 + x, inst.box.y0 + y) ? 1.0f : 0.0f;
        ie.edges_path = image_id + "_inst" + std::to_string(inst.id) + ".pedp";
        write_prob_map(out_root / ie.edges_path, crop);
        ie.edges_crc32 = file_crc32(out_root / ie.edges_path);
        entry.instances.push_back(std::move(ie));
    }
    return entry;
}

PredictionManifest read_prediction_manifest(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    if (j.value("format", "") != "ped-pred-manifest")
        throw FormatError(path.string() + ": not a prediction manifest");
    PredictionManifest m;
    m.version = j.at("version").get<int>();
    m.root = path.parent_path();
    for (const json& ji : j.at("images")) {
        PredImageEntry e;
        e.id = ji.at("id").get<std::string>();
        if (ji.contains("semantic"))
            e.semantic_path = ji.at("semantic").get<std::string>();
        if (ji.contains("semantic_quantized"))
            for (const json& q : ji.at("semantic_quantized"))
                e.semantic_quantized.push_back(q.get<std::string>());
        if (e.semantic_path.empty() == e.semantic_quantized.empty())
            throw FormatError(path.string() + ": image '" + e.id
                              + "' needs exactly one of semantic / semantic_quantized");
        for (const json& jinst : ji.value("instances", json::array())) {
            PredInstanceEntry ie;
            ie.category = jinst.at("category").get<std::uint16_t>();
            ie.score = jinst.at("score").get<double>();
            if (!(ie.score >= 0.0 && ie.score <= 1.0))
                throw RangeError(path.string() + ": prediction score outside [0,1]");
            ie.box = box_from_json(jinst.at("box"), path);
            ie.edges_path = jinst.at("edges").get<std::string>();
            require_exists(m.root / ie.edges_path, path);
            e.instances.push_back(std::move(ie));
        }
        m.images.push_back(std::move(e));
    }
    return m;
}

void write_prediction_manifest(const std::filesystem::path& path,
                               const PredictionManifest& manifest) {
    json j;
    j["format"] = "ped-pred-manifest";
    j["version"] = manifest.version;
    json images = json::array();
    for (const PredImageEntry& e : manifest.images) {
        json ji;
        ji["id"] = e.id;
        if (!e.semantic_path.empty())
            ji["semantic"] = e.semantic_path;
        if (!e.semantic_quantized.empty())
            ji["semantic_quantized"] = e.semantic_quantized;
        json insts = json::array();
        for (const PredInstanceEntry& ie : e.instances) {
            insts.push_back({{"category", ie.category},
                             {"score", ie.score},
                             {"box", box_to_json(ie.box)},
                             {"edges", ie.edges_path}});
        }
        ji["instances"] = std::move(insts);
        images.push_back(std::move(ji));
    }
    j["images"] = std::move(images);
    write_file_atomic(path, j.dump(2) + "\n");
}

ImagePrediction load_prediction(const PredictionManifest& manifest, const PredImageEntry& entry,
                                const GtImageEntry& gt_entry, const CategorySet& cats,
                                bool allow_quantized, bool strict) {
    ImagePrediction out;
    if (!entry.semantic_path.empty()) {
        out.semantic = read_prob_map(manifest.root / entry.semantic_path, strict);
    } else {
        if (!allow_quantized)
            throw FormatError("image '" + entry.id
                              + "': quantized semantic input requires --quantized");
        if (static_cast<int>(entry.semantic_quantized.size()) != cats.size())
            throw FormatError("image '" + entry.id + "': expected " + std::to_string(cats.size())
                              + " quantized channels");
        out.semantic = ProbMap(cats.size(), gt_entry.width, gt_entry.height);
        for (int c = 0; c < cats.size(); ++c) {
            const ProbMap plane = read_gray8_prob_png(
                manifest.root / entry.semantic_quantized[static_cast<std::size_t>(c)]);
            if (plane.width != gt_entry.width || plane.height != gt_entry.height)
                throw FormatError("image '" + entry.id + "': quantized channel shape mismatch");
            std::copy(plane.values.begin(), plane.values.end(),
                      out.semantic.values.begin() + static_cast<std::size_t>(c) * out.semantic.plane_size());
        }
    }
    if (out.semantic.channels != cats.size() || out.semantic.width != gt_entry.width
        || out.semantic.height != gt_entry.height)
        throw FormatError("image '" + entry.id + "': semantic prediction shape mismatch");

    for (const PredInstanceEntry& ie : entry.instances) {
        if (ie.box.x0 < 0 || ie.box.y0 < 0 || ie.box.x1 > gt_entry.width
            || ie.box.y1 > gt_entry.height)
            throw FormatError("image '" + entry.id + "': prediction box outside canvas");
        if (cats.at(cats.index_of(ie.category)).kind != CategoryKind::Instance)
            throw FormatError("image '" + entry.id + "': predicted instance has stuff category "
                              + std::to_string(ie.category));
        PredInstance p;
        p.category = ie.category;
        p.score = ie.score;
        p.box = ie.box;
        p.edges = read_prob_map(manifest.root / ie.edges_path, strict);
        if (p.edges.channels != 1 || p.edges.width != ie.box.width()
            || p.edges.height != ie.box.height())
            throw FormatError("image '" + entry.id + "': prediction crop shape mismatch");
        out.instances.push_back(std::move(p));
    }
    return out;
}

GtScene convert_scene(const LabelMap& labels, const InstanceMap* instances,
                      const std::map<std::uint16_t, std::uint16_t>& instance_categories,
                      const CategorySet& cats, int radius, bool filter_unknown_labels) {
    const LabelMap* effective = &labels;
    LabelMap filtered;
    if (filter_unknown_labels) {
        filtered = labels;
        for (std::uint16_t& v : filtered.data)
            if (v != kIgnoreLabel && !cats.contains(v))
                v = kIgnoreLabel;
        effective = &filtered;
    }

    GtScene scene;
    scene.semantic = semantic_boundaries(*effective, radius, cats);
    if (instances) {
        if (instances->width != labels.width || instances->height != labels.height)
            throw ShapeError("convert_scene: label and instance raster dimensions differ");
        for (const auto& [id, cat] : instance_categories) {
            (void)id;
            if (cats.at(cats.index_of(cat)).kind != CategoryKind::Instance)
                throw ManifestError("instance category " + std::to_string(cat)
                                    + " is not instance-kind");
        }
        scene.instances = instance_boundaries(*instances, instance_categories, radius);
        std::erase_if(scene.instances,
                      [](const GtInstance& g) { return g.edges.empty(); });
    }
    return scene;
}

namespace {

std::map<std::uint16_t, std::uint16_t>
read_instance_sidecar(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    if (!j.is_object())
        throw FormatError(path.string() + ": expected an object mapping id to category");
    std::map<std::uint16_t, std::uint16_t> out;
    for (const auto& [key, value] : j.items()) {
        const int id = std::stoi(key);
        if (id <= 0 || id > 0xffff)
            throw FormatError(path.string() + ": instance id out of range: " + key);
        out[static_cast<std::uint16_t>(id)] = value.get<std::uint16_t>();
    }
    return out;
}

} // namespace

ConvertOutcome convert_dataset(const std::filesystem::path& seg_root,
                               const std::filesystem::path& out_root, const CategorySet& cats,
                               const ConvertOptions& options) {
    if (options.radius < 1)
        throw ParamError("convert_dataset: radius must be >= 1");
    if (!std::filesystem::is_directory(seg_root))
        throw IoError(seg_root.string() + " is not a directory");
    std::filesystem::create_directories(out_root);

    static const std::string kLabelSuffix = "_labels.png";
    std::vector<std::string> ids;
    for (const auto& de : std::filesystem::directory_iterator(seg_root)) {
        const std::string name = de.path().filename().string();
        if (name.size() > kLabelSuffix.size()
            && name.ends_with(kLabelSuffix))
            ids.push_back(name.substr(0, name.size() - kLabelSuffix.size()));
    }
    std::sort(ids.begin(), ids.end());

    ConvertOutcome outcome;
    DatasetManifest manifest;
    manifest.radius = options.radius;
    manifest.categories = cats;
    manifest.root = out_root;

    struct Slot {
        GtImageEntry entry;
        std::string error;
        bool ok = false;
    };
    std::vector<Slot> slots(ids.size());
    parallel_for_index(ids.size(), options.jobs, [&](std::size_t i) {
        const std::string& id = ids[i];
        try {
            const LabelMap labels = read_label_png(seg_root / (id + kLabelSuffix));
            InstanceMap inst_map;
            std::map<std::uint16_t, std::uint16_t> inst_cats;
            const std::filesystem::path inst_png = seg_root / (id + "_instances.png");
            const bool has_instances = std::filesystem::exists(inst_png);
            if (has_instances) {
                inst_map = read_instance_png(inst_png);
                inst_cats = read_instance_sidecar(seg_root / (id + "_instances.json"));
            }
            const GtScene scene =
                convert_scene(labels, has_instances ? &inst_map : nullptr, inst_cats, cats,
                              options.radius, options.filter_unknown_labels);
            slots[i].entry = save_gt_scene(out_root, id, scene, labels.width, labels.height);
            slots[i].ok = true;
        } catch (const Error& e) {
            slots[i].error = e.what();
        }
    });
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (slots[i].ok) {
            manifest.images.push_back(std::move(slots[i].entry));
            ++outcome.converted;
        } else {
            outcome.errors.emplace_back(ids[i], slots[i].error);
        }
    }

    write_dataset_manifest(out_root / "manifest.json", manifest);
    return outcome;
}

PerturbSpec read_perturb_spec(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    PerturbSpec spec;
    spec.seed = j.value("seed", static_cast<std::uint64_t>(0));
    for (const json& jop : j.value("ops", json::array())) {
        const std::string op = jop.at("op").get<std::string>();
        if (op == "dilate") {
            spec.ops.push_back(PerturbOp::dilate(jop.at("r").get<int>()));
        } else if (op == "shift") {
            spec.ops.push_back(PerturbOp::shift(jop.at("dx").get<int>(), jop.at("dy").get<int>()));
        } else if (op == "drop_instances") {
            spec.ops.push_back(PerturbOp::drop_instances(jop.at("fraction").get<double>()));
        } else if (op == "jitter_boxes") {
            spec.ops.push_back(PerturbOp::jitter_boxes(jop.at("max_px").get<int>()));
        } else if (op == "flip_noise") {
            spec.ops.push_back(PerturbOp::flip_noise(jop.at("rate").get<double>()));
        } else if (op == "score_assign") {
            ScoreDist d;
            const std::string dist = jop.at("dist").get<std::string>();
            if (dist == "constant")
                d.kind = ScoreDist::Kind::Constant;
            else if (dist == "uniform")
                d.kind = ScoreDist::Kind::Uniform;
            else
                throw FormatError(path.string() + ": unknown score distribution '" + dist + "'");
            d.a = jop.at("a").get<double>();
            d.b = jop.value("b", d.a);
            spec.ops.push_back(PerturbOp::score_assign(d));
        } else {
            throw FormatError(path.string() + ": unknown perturbation op '" + op + "'");
        }
    }
    validate(spec);
    return spec;
}

void perturb_dataset(const DatasetManifest& gt, const PerturbSpec& spec,
                     const std::filesystem::path& out_dir, int jobs) {
    validate(spec);
    std::filesystem::create_directories(out_dir);

    PredictionManifest manifest;
    manifest.root = out_dir;
    manifest.images.resize(gt.images.size());

    parallel_for_index(gt.images.size(), jobs, [&](std::size_t i) {
        const GtImageEntry& entry = gt.images[i];
        const GtScene scene = load_gt_scene(gt, entry, false);
        PerturbSpec image_spec = spec;
        image_spec.seed = spec.seed ^ fnv1a64(entry.id.c_str());

        PredImageEntry pe;
        pe.id = entry.id;
        pe.semantic_path = entry.id + "_pred_sem.pedp";
        write_prob_map(out_dir / pe.semantic_path, perturb_semantic(scene.semantic, image_spec));

        const std::vector<PredInstance> preds =
            perturb_instances(scene.instances, image_spec, entry.width, entry.height);
        for (std::size_t k = 0; k < preds.size(); ++k) {
            PredInstanceEntry ie;
            ie.category = preds[k].category;
            ie.score = preds[k].score;
            ie.box = preds[k].box;
            ie.edges_path = entry.id + "_pred_inst" + std::to_string(k) + ".pedp";
            write_prob_map(out_dir / ie.edges_path, preds[k].edges);
            pe.instances.push_back(std::move(ie));
        }
        manifest.images[i] = std::move(pe);
    });

    write_prediction_manifest(out_dir / "manifest.json", manifest);
}

} // namespace ped
