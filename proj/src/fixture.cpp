#include "sentrel/fixture.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sentrel/corpus.hpp"
#include "sentrel/error.hpp"
#include "sentrel/text.hpp"

namespace sentrel::fixture {

namespace fs = std::filesystem;

namespace {

struct EntityDef {
  std::vector<const char*> names;  // first is canonical
  const char* type;
};

const std::vector<EntityDef> kEntities = {
    {{"Zorvia", "Republic of Zorvia"}, "GEO"},
    {{"Kestland"}, "GEO"},
    {{"Ulmara", "Ulmaran Federation"}, "GEO"},
    {{"Drevonia"}, "GEO"},
    {{"Varnet"}, "GEO"},
    {{"Oskel"}, "GEO"},
    {{"Marta Velen", "Velen"}, "PER"},
    {{"Ivo Parsk", "Parsk"}, "PER"},
    {{"Lena Dorow"}, "PER"},
    {{"Northern Alliance", "NA"}, "ORG"},
    {{"Coral Bank"}, "ORG"},
    {{"Tessa River"}, "LOC"},
};

const char* const kCountries[] = {"Zorvia", "Kestland", "Ulmaran Federation", "Drevonia"};
const char* const kCapitals[] = {"Varnet", "Oskel"};

// "{0}" is the opinion holder, "{1}" the target.
const char* const kPositive[] = {
    "{0} praises {1}.",
    "{0} warmly supports {1}, officials said.",
    "{0} welcomes the decision of {1}.",
};
const char* const kNegative[] = {
    "{0} condemns {1}.",
    "{0} sharply criticizes {1}, calling the move reckless.",
    "{0} is deeply concerned about {1} and threatens sanctions.",
};
const char* const kNeutral[] = {
    "{0} met {1} on Tuesday.",
    "{0} and {1} discussed trade quotas.",
    "Delegates from {0} traveled to {1}.",
};
const char* const kSingle[] = {
    "{0} announced a new budget.",
    "The weather in {0} was mild.",
    "{0} published its annual report.",
};

const std::map<std::string, std::string> kLemmas = {
    {"praises", "praise"},     {"supports", "support"},   {"welcomes", "welcome"}, {"condemns", "condemn"},
    {"criticizes", "criticize"}, {"threatens", "threaten"}, {"officials", "official"}, {"calling", "call"},
    {"sanctions", "sanction"}, {"delegates", "delegate"},  {"traveled", "travel"},   {"discussed", "discuss"},
    {"announced", "announce"}, {"published", "publish"},   {"is", "be"},           {"was", "be"},
    {"met", "meet"},           {"quotas", "quota"},
};

const char* const kLexicon =
    "# term, orientation\n"
    "praise, positive\n"
    "support, positive\n"
    "welcome, positive\n"
    "warmly, positive\n"
    "condemn, negative\n"
    "criticize, negative\n"
    "threaten, negative\n"
    "deeply concerned, negative\n"
    "reckless, negative\n"
    "trade, neutral\n"
    "decision, positive/negative\n";

struct Mention {
  std::size_t group;
  std::size_t start;
  std::size_t end;
  std::string surface;
};

class DocBuilder {
 public:
  void sentence(const char* tmpl, std::size_t g0, std::size_t g1, std::mt19937_64& rng) {
    if (!text_.empty()) text_ += (rng() % 4 == 0) ? U"\n" : U" ";
    std::set<std::size_t> groups;
    for (const char* p = tmpl; *p;) {
      if (p[0] == '{' && (p[1] == '0' || p[1] == '1') && p[2] == '}') {
        const std::size_t g = p[1] == '0' ? g0 : g1;
        const auto& names = kEntities[g].names;
        const std::string name = names[rng() % names.size()];
        const std::size_t start = text_.size();
        text_ += text::decode_utf8(name);
        mentions_.push_back({g, start, text_.size(), name});
        groups.insert(g);
        p += 3;
      } else {
        text_.push_back(static_cast<unsigned char>(*p));
        ++p;
      }
    }
    sentence_groups_.push_back(std::move(groups));
  }

  const std::u32string& text() const { return text_; }
  const std::vector<Mention>& mentions() const { return mentions_; }
  const std::vector<std::set<std::size_t>>& sentence_groups() const { return sentence_groups_; }

 private:
  std::u32string text_;
  std::vector<Mention> mentions_;
  std::vector<std::set<std::size_t>> sentence_groups_;
};

void write(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << body;
}

std::string canonical(std::size_t g) { return text::normalize_name(kEntities[g].names.front()); }

}  // namespace

FixtureTruth generate(const FixtureSpec& spec, const fs::path& out_dir) {
  if (spec.n_docs == 0) throw Error("fixture needs at least one document");
  if (spec.min_entities < 2 || spec.max_entities < spec.min_entities || spec.max_entities > kEntities.size()) {
    throw Error("fixture entity range must lie within [2, " + std::to_string(kEntities.size()) + "]");
  }
  if (fs::exists(out_dir) && !fs::is_empty(out_dir)) {
    throw Error("fixture output directory is not empty: " + out_dir.string());
  }
  fs::create_directories(out_dir / "corpus");

  std::mt19937_64 rng(spec.seed);
  const auto uniform = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  {
    std::string syn;
    for (const auto& e : kEntities) {
      for (std::size_t i = 0; i < e.names.size(); ++i) syn += (i ? ", " : "") + std::string(e.names[i]);
      syn += "\n";
    }
    write(out_dir / "synonyms.txt", syn);
    write(out_dir / "lexicon.csv", kLexicon);
    std::string countries, capitals;
    for (const char* c : kCountries) countries += std::string(c) + "\n";
    for (const char* c : kCapitals) capitals += std::string(c) + "\n";
    write(out_dir / "countries.txt", countries);
    write(out_dir / "capitals.txt", capitals);

    // Random 8-d vectors for every word of every entity name.
    std::set<std::string> words;
    for (const auto& e : kEntities) {
      for (const char* n : e.names) {
        for (auto& w : text::word_pieces(n)) words.insert(w);
      }
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::ostringstream emb;
    emb << words.size() << " 8\n";
    char buf[32];
    for (const auto& w : words) {
      emb << w;
      for (int k = 0; k < 8; ++k) {
        std::snprintf(buf, sizeof buf, " %.6f", gauss(rng));
        emb << buf;
      }
      emb << "\n";
    }
    write(out_dir / "embeddings.txt", emb.str());
  }

  const corpus::SynonymGroups groups = corpus::SynonymGroups::load(out_dir / "synonyms.txt");
  FixtureTruth truth;

  for (std::size_t d = 0; d < spec.n_docs; ++d) {
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "doc%02zu", d + 1);
    const std::string id = idbuf;

    // Pick this document's groups.
    std::vector<std::size_t> pool(kEntities.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    for (std::size_t i = 0; i + 1 < pool.size(); ++i) std::swap(pool[i], pool[i + uniform(pool.size() - i)]);
    const std::size_t m = spec.min_entities + uniform(spec.max_entities - spec.min_entities + 1);
    pool.resize(m);

    // Distinct unordered pairs, each assigned one role.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(pool[i], pool[j]);
    }
    for (std::size_t i = 0; i + 1 < pairs.size(); ++i) std::swap(pairs[i], pairs[i + uniform(pairs.size() - i)]);
    const std::size_t n_pos = 2 + uniform(2);
    const std::size_t n_neg = 2 + uniform(2);
    const std::size_t n_neu = 2 + uniform(3);

    struct Planned {
      std::size_t source, target;
      Label label;
    };
    std::vector<Planned> planned;
    std::size_t next = 0;
    const auto take = [&](std::size_t count, Label label) {
      for (std::size_t k = 0; k < count && next < pairs.size(); ++k, ++next) {
        auto [a, b] = pairs[next];
        if (uniform(2)) std::swap(a, b);
        planned.push_back({a, b, label});
      }
    };
    take(n_pos, Label::pos);
    take(n_neg, Label::neg);
    take(n_neu, Label::neu);

    // Each planned pair gets one or two sentences; singles pad the text.
    std::vector<std::pair<const char*, std::pair<std::size_t, std::size_t>>> sentences;
    for (const auto& p : planned) {
      const std::size_t reps = 1 + uniform(2);
      for (std::size_t r = 0; r < reps; ++r) {
        const char* tmpl = p.label == Label::pos   ? kPositive[uniform(3)]
                           : p.label == Label::neg ? kNegative[uniform(3)]
                                                   : kNeutral[uniform(3)];
        sentences.push_back({tmpl, {p.source, p.target}});
      }
    }
    for (std::size_t g : pool) {
      if (uniform(2)) sentences.push_back({kSingle[uniform(3)], {g, g}});
    }
    for (std::size_t i = 0; i + 1 < sentences.size(); ++i) {
      std::swap(sentences[i], sentences[i + uniform(sentences.size() - i)]);
    }

    DocBuilder doc;
    for (const auto& [tmpl, gp] : sentences) doc.sentence(tmpl, gp.first, gp.second, rng);

    const fs::path base = out_dir / "corpus" / id;
    const std::string body = text::encode_utf8(doc.text()) + "\n";
    write(fs::path(base.string() + ".txt"), body);

    std::vector<corpus::MentionRow> rows;
    std::ostringstream ann;
    for (std::size_t k = 0; k < doc.mentions().size(); ++k) {
      const auto& mm = doc.mentions()[k];
      const std::string mid = "T" + std::to_string(k + 1);
      ann << mid << '\t' << kEntities[mm.group].type << '\t' << mm.start << '\t' << mm.end << '\t' << mm.surface
          << '\n';
      rows.push_back({mid, *parse_entity_type(kEntities[mm.group].type), mm.start, mm.end, mm.surface});
    }
    write(fs::path(base.string() + ".ann"), ann.str());

    std::ostringstream opin;
    for (const auto& p : planned) {
      if (p.label == Label::neu) continue;
      opin << kEntities[p.source].names.front() << ", " << kEntities[p.target].names.front() << ", "
           << to_string(p.label) << '\n';
    }
    // Author opinions are retained by the loader but never paired.
    if (uniform(2)) opin << "Author, " << kEntities[pool.front()].names.front() << ", neg\n";
    write(fs::path(base.string() + ".opin.txt"), opin.str());

    // Lemmas, one per word token as the loader tokenizes the text.
    const auto parsed = corpus::build_document(id, body, rows, groups);
    std::ostringstream lem;
    for (const auto& t : parsed.tokens) {
      if (t.kind != corpus::TokenKind::word) continue;
      const auto it = kLemmas.find(t.lemma);
      lem << (it == kLemmas.end() ? t.lemma : it->second) << '\n';
    }
    write(fs::path(base.string() + ".lemmas"), lem.str());

    // Expected instances: every ordered pair sharing a sentence.
    std::map<std::pair<std::size_t, std::size_t>, Label> gold;
    for (const auto& p : planned) {
      if (p.label != Label::neu) gold[{p.source, p.target}] = p.label;
    }
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<LabeledPair> doc_truth;
    for (const auto& gs : doc.sentence_groups()) {
      for (auto a : gs) {
        for (auto b : gs) {
          if (a == b || !seen.insert({canonical(a), canonical(b)}).second) continue;
          const auto it = gold.find({a, b});
          doc_truth.push_back({{id, GroupId(canonical(a)), GroupId(canonical(b))},
                               it == gold.end() ? Label::neu : it->second});
        }
      }
    }
    std::sort(doc_truth.begin(), doc_truth.end(),
              [](const LabeledPair& x, const LabeledPair& y) { return x.key < y.key; });
    truth.instances.insert(truth.instances.end(), doc_truth.begin(), doc_truth.end());
    (d < (spec.n_docs + 1) / 2 ? truth.train_ids : truth.test_ids).push_back(id);
  }

  std::ostringstream tsv;
  for (const auto& p : truth.instances) {
    tsv << p.key.doc_id << '\t' << p.key.source.key() << '\t' << p.key.target.key() << '\t' << to_string(p.label)
        << '\n';
  }
  write(out_dir / "truth.tsv", tsv.str());

  nlohmann::json cfg{{"corpus_dir", "corpus"},
                     {"synonyms", "synonyms.txt"},
                     {"lexicon", "lexicon.csv"},
                     {"embeddings", "embeddings.txt"},
                     {"countries", "countries.txt"},
                     {"capitals", "capitals.txt"},
                     {"output_dir", "out"},
                     {"train_ids", truth.train_ids},
                     {"test_ids", truth.test_ids},
                     {"classifier", "random-forest"},
                     {"seed", spec.seed}};
  write(out_dir / "config.json", cfg.dump(2) + "\n");
  return truth;
}

}  // namespace sentrel::fixture
