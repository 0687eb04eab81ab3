#!/usr/bin/env python3
# Copyright 2026 The Batik KG Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates the batik knowledge-graph fixture under data/.

Writes the ontology, seed dictionary, base lexicon, corpus, dependency
parses, entity types, curated triples and alias table. The review file is
written from a cluster export when one is given (--cluster-export), else
every non-seed entity becomes a hand-added row.

Output is deterministic for a given --seed.
"""

import argparse
import json
import os
import random
import sys

CATEGORIES = ["动物纹", "植物纹", "几何纹", "自然纹", "人物纹", "器物纹"]

PATTERNS = {
    "动物纹": ["蝴蝶纹", "鸟纹", "鱼纹", "龙纹", "锦鸡纹", "凤鸟纹", "蛙纹", "蝙蝠纹",
            "牛纹", "狮子纹", "虎纹", "鹭鸶纹", "燕子纹", "喜鹊纹", "蜈蚣纹", "蜘蛛纹",
            "螃蟹纹", "虾纹", "麒麟纹", "象纹", "马纹", "猴纹", "鸡纹", "鸭纹", "鹅纹",
            "蜜蜂纹", "蝉纹", "蛇纹", "龟纹", "鹿纹"],
    "植物纹": ["石榴纹", "梨花纹", "桃花纹", "荷花纹", "菊花纹", "牡丹纹", "梅花纹", "莲蓬纹",
            "葫芦纹", "枫树纹", "蕨草纹", "藤蔓纹", "稻穗纹", "向日葵纹", "茶花纹", "兰草纹",
            "竹叶纹", "桂花纹", "树叶纹", "瓜子纹"],
    "几何纹": ["铜鼓纹", "涡纹", "螺旋纹", "回纹", "十字纹", "菱形纹", "圆圈纹", "三角纹",
            "方格纹", "锯齿纹", "水波纹", "太阳纹", "八角纹", "卍字纹"],
    "自然纹": ["云纹", "雷纹", "星纹", "月亮纹", "山纹", "河流纹", "火纹", "彩虹纹"],
    "人物纹": ["蝴蝶妈妈", "姜央", "相两", "相芒", "人物骑马纹", "舞蹈人纹", "祖先像纹"],
    "器物纹": ["芦笙纹", "银饰纹", "花篮纹", "织机纹", "船纹", "桥纹", "房屋纹", "谷仓纹"],
}

MEANINGS = ["子嗣绵延", "夫妻和睦", "敬重祖先", "吉祥如意", "五谷丰登", "驱邪避灾",
            "健康长寿", "家族兴旺", "勤劳勇敢", "纳吉求福", "爱情美满", "生命轮回",
            "团结和谐", "光明希望", "富贵平安"]
WORSHIPS = ["生殖崇拜", "鬼神崇拜", "祖先崇拜", "图腾崇拜", "自然崇拜", "英雄崇拜"]
SOURCES = ["神话故事", "自然化境", "大自然", "民间传说", "日常生活", "历史迁徙"]

POOLS = {
    "动物纹": (["子嗣绵延", "敬重祖先", "吉祥如意", "家族兴旺", "勤劳勇敢", "驱邪避灾",
             "生命轮回", "爱情美满"],
            ["图腾崇拜", "生殖崇拜", "祖先崇拜", "鬼神崇拜"],
            ["神话故事", "大自然", "自然化境", "民间传说"]),
    "植物纹": (["子嗣绵延", "五谷丰登", "健康长寿", "爱情美满", "富贵平安", "吉祥如意",
             "夫妻和睦"],
            ["生殖崇拜", "自然崇拜"],
            ["大自然", "自然化境", "日常生活"]),
    "几何纹": (["光明希望", "团结和谐", "生命轮回", "驱邪避灾", "纳吉求福"],
            ["自然崇拜", "祖先崇拜", "鬼神崇拜"],
            ["自然化境", "历史迁徙", "日常生活", "神话故事"]),
    "自然纹": (["光明希望", "五谷丰登", "驱邪避灾", "生命轮回"],
            ["自然崇拜", "鬼神崇拜"],
            ["大自然", "自然化境"]),
    "人物纹": (["敬重祖先", "勤劳勇敢", "家族兴旺", "团结和谐"],
            ["祖先崇拜", "英雄崇拜"],
            ["神话故事", "民间传说", "历史迁徙"]),
    "器物纹": (["团结和谐", "五谷丰登", "富贵平安", "夫妻和睦", "纳吉求福"],
            ["祖先崇拜", "自然崇拜"],
            ["日常生活", "历史迁徙"]),
}

# Facts stated in the source tables and examples; always present.
FIXED = [
    ("蝴蝶纹", "蕴含", "敬重祖先"),
    ("鱼纹", "崇拜", "生殖崇拜"),
    ("梨花纹", "来源", "大自然"),
    ("石榴纹", "蕴含", "子嗣绵延"),
    ("鱼纹", "蕴含", "子嗣绵延"),
    ("铜鼓纹", "蕴含", "光明希望"),
    ("铜鼓纹", "蕴含", "团结和谐"),
    ("蝴蝶纹", "崇拜", "祖先崇拜"),
]

# Not expressible by the shipped extraction rules.
KINSHIP = [
    ("蝴蝶纹", "同义", "蝴蝶妈妈"),
    ("铜鼓纹", "同义", "太阳纹"),
    ("涡纹", "同义", "螺旋纹"),
    ("锦鸡纹", "同义", "凤鸟纹"),
    ("蝴蝶纹", "母子", "龙纹"),
    ("蝴蝶妈妈", "母子", "姜央"),
    ("姜央", "父女", "相两"),
    ("姜央", "父子", "相芒"),
    ("相芒", "兄弟姐妹", "相两"),
]

CATEGORY_MEANINGS = [
    ("动物纹", "蕴含", "生命轮回"),
    ("植物纹", "蕴含", "五谷丰登"),
    ("几何纹", "蕴含", "光明希望"),
    ("自然纹", "蕴含", "驱邪避灾"),
    ("人物纹", "蕴含", "敬重祖先"),
    ("器物纹", "蕴含", "富贵平安"),
]

SEED_PATTERNS = ["蝴蝶纹", "鱼纹", "鸟纹", "龙纹", "铜鼓纹", "石榴纹", "梨花纹", "锦鸡纹",
                 "蝴蝶妈妈", "姜央", "相两", "相芒", "太阳纹", "涡纹", "荷花纹", "蛙纹",
                 "葫芦纹"]

TARGET_TRIPLES = 419
WORSHIP_PATTERNS = 70
MANUAL_MEANINGS = 15
DUPLICATE_SENTENCES = 20
COORDINATED_PAIRS = 12

FUNCTION_WORDS = ["是", "一种", "常见", "属于", "蕴含", "象征", "体现", "了", "来源于", "源于",
                  "和", "都", "的", "造就", "苗族", "祖先", "妇女", "喜欢", "在", "衣裙", "上",
                  "绘制", "蜡染", "作品", "中", "经常", "出现", "老人", "讲述", "故事",
                  "人们", "借助", "纹样", "表达", "愿望", "这种", "观念", "影响", "题材",
                  "图案", "构图", "饱满", "线条", "流畅", "姑娘", "学习", "画", "传统",
                  "传承", "至今", "寄托", "情感", "体现在", "许多", "节日", "盛装"]

FILLERS = {
    "纹样": ["苗族妇女喜欢在衣裙上绘制{e}", "{e}在蜡染作品中经常出现", "老人讲述了{e}的故事",
           "姑娘学习画{e}", "{e}构图饱满线条流畅", "传统{e}传承至今"],
    "寓意": ["人们借助纹样表达{e}的愿望", "许多纹样寄托了{e}的情感", "{e}的愿望体现在节日盛装上"],
    "崇拜意识": ["{e}的观念影响了蜡染题材", "苗族蜡染图案体现在{e}的观念中", "{e}影响了纹样构图"],
    "原型来源": ["许多纹样取材于{e}", "{e}是蜡染题材的来源", "苗族妇女从{e}中学习构图"],
}
FILLER_WORDS = ["取材于", "来源"]


def all_patterns():
    out = []
    for c in CATEGORIES:
        out.extend(PATTERNS[c])
    return out


def category_of(p):
    for c in CATEGORIES:
        if p in PATTERNS[c]:
            return c
    raise KeyError(p)


def build_triples(rng):
    """Full graph as ordered triples, plus the subset stated only by hand."""
    specific = all_patterns()
    triples = []
    seen = set()

    def add(t):
        if t in seen:
            return False
        seen.add(t)
        triples.append(t)
        return True

    for t in FIXED:
        add(t)
    for p in specific:
        add((p, "属于", category_of(p)))
    for p in specific:
        c = category_of(p)
        if not any(s == p and r == "来源" for s, r, _ in triples):
            add((p, "来源", rng.choice(POOLS[c][2])))
    worshipped = {s for s, r, _ in triples if r == "崇拜"}
    order = specific[:]
    rng.shuffle(order)
    for p in order:
        if len(worshipped) >= WORSHIP_PATTERNS:
            break
        if p in worshipped:
            continue
        add((p, "崇拜", rng.choice(POOLS[category_of(p)][1])))
        worshipped.add(p)
    manual = []
    for t in KINSHIP + CATEGORY_MEANINGS:
        add(t)
        manual.append(t)
    # Every meaning, worship and source reachable at least once.
    used = {o for _, _, o in triples}
    for m in MEANINGS:
        if m not in used:
            p = next(p for p in specific if m in POOLS[category_of(p)][0])
            add((p, "蕴含", m))
    for w in WORSHIPS:
        assert w in used, w
    for s in SOURCES:
        assert s in used, s
    # Fill meanings up to the target: one per pattern first, then a second.
    for round_ in range(4):
        for p in order:
            if len(triples) >= TARGET_TRIPLES:
                break
            have = [o for s, r, o in triples if s == p and r == "蕴含"]
            if len(have) > round_:
                continue
            pool = [m for m in POOLS[category_of(p)][0] if m not in have]
            if pool:
                add((p, "蕴含", rng.choice(pool)))
    assert len(triples) == TARGET_TRIPLES, len(triples)
    meaning_triples = [t for t in triples if t[1] == "蕴含" and t not in manual
                       and t not in FIXED]
    for t in rng.sample(meaning_triples, MANUAL_MEANINGS):
        manual.append(t)
    return triples, manual


# Parse templates: (surface verb, tokens with head/deprel).
def simple_parse(subject, verb, obj, middle=()):
    """subject VERB [middle ATT->obj] obj."""
    toks = [(subject, 2, "SBV"), (verb, 0, "HED")]
    n_obj = 3 + len(middle)
    for m in middle:
        toks.append((m, n_obj, "ATT"))
    toks.append((obj, 2, "VOB"))
    return toks


def verb_with_particle(subject, verb, obj):
    return [(subject, 2, "SBV"), (verb, 0, "HED"), ("了", 2, "RAD"), (obj, 2, "VOB")]


def coordinated(s1, s2, verb, obj):
    return [(s1, 5, "SBV"), ("和", 3, "LAD"), (s2, 1, "COO"), ("都", 5, "ADV"),
            (verb, 0, "HED"), (obj, 5, "VOB")]


def sentence_for(t, variant):
    s, r, o = t
    if r == "属于":
        if variant == 0:
            return simple_parse(s, "是", o, ("一种", "常见"))
        if variant == 1:
            return simple_parse(s, "属于", o)
        return simple_parse(s, "是", o, ("一种",))
    if r == "蕴含":
        return simple_parse(s, "蕴含" if variant == 0 else "象征", o)
    if r == "崇拜":
        return verb_with_particle(s, "体现", o)
    if r == "来源":
        return simple_parse(s, "来源于" if variant == 0 else "源于", o)
    raise ValueError(r)


def non_extracting():
    """Parsed sentences that the rules must not turn into triples."""
    return [
        # 蝴蝶妈妈造就了苗族祖先姜央: no rule has 造就 as pivot.
        [("蝴蝶妈妈", 2, "SBV"), ("造就", 0, "HED"), ("了", 2, "RAD"),
         ("苗族", 5, "ATT"), ("祖先", 6, "ATT"), ("姜央", 2, "VOB")],
        # X是Z的象征: the object of 是 is not an entity.
        [("石榴纹", 2, "SBV"), ("是", 0, "HED"), ("子嗣绵延", 5, "ATT"),
         ("的", 3, "RAD"), ("象征", 2, "VOB")],
        [("鱼纹", 2, "SBV"), ("是", 0, "HED"), ("夫妻和睦", 5, "ATT"),
         ("的", 3, "RAD"), ("象征", 2, "VOB")],
    ]


def text_of(parse):
    return "".join(f for f, _, _ in parse)


def tokenize(text, dictionary, max_len):
    out = []
    i = 0
    while i < len(text):
        best = None
        for n in range(min(max_len, len(text) - i), 1, -1):
            if text[i:i + n] in dictionary:
                best = text[i:i + n]
                break
        if best is None:
            best = text[i]
        out.append(best)
        i += len(best)
    return out


def write(path, text):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def ontology():
    concepts = [
        {"name": "纹样", "aliases": ["Pattern"], "color": "#8fbcd4"},
        {"name": "寓意", "aliases": ["Meaning"], "color": "#f4c27a"},
        {"name": "崇拜意识", "aliases": ["Worship", "Worship Consciousness"],
         "color": "#c9a0dc"},
        {"name": "原型来源", "aliases": ["Source", "Prototype Source"], "color": "#9ed39a"},
    ]
    relations = [
        {"name": "蕴含", "aliases": ["Mean"], "domain": "纹样", "range": "寓意"},
        {"name": "属于", "aliases": ["Belong to"], "domain": "纹样", "range": "纹样"},
        {"name": "崇拜", "aliases": ["Worship"], "domain": "纹样", "range": "崇拜意识"},
        {"name": "来源", "aliases": ["Origin from", "来源于"], "domain": "纹样",
         "range": "原型来源"},
        {"name": "同义", "aliases": ["Synonym"], "domain": "纹样", "range": "纹样"},
        {"name": "母子", "aliases": ["Mother & child"], "domain": "纹样", "range": "纹样"},
        {"name": "父女", "aliases": ["Father & daughter"], "domain": "纹样", "range": "纹样"},
        {"name": "父子", "aliases": ["Father & son"], "domain": "纹样", "range": "纹样"},
        {"name": "兄弟姐妹", "aliases": ["Sibling"], "domain": "纹样", "range": "纹样"},
    ]
    normalization = [
        {"raw": "是", "object": "纹样", "relation": "属于"},
        {"raw": "蕴含", "object": "寓意", "relation": "蕴含"},
        {"raw": "象征", "object": "寓意", "relation": "蕴含"},
        {"raw": "体现", "object": "崇拜意识", "relation": "崇拜"},
        {"raw": "崇拜", "object": "崇拜意识", "relation": "崇拜"},
        {"raw": "源于", "object": "原型来源", "relation": "来源"},
    ]
    doc = {"format": "batik-ontology", "version": 1, "concepts": concepts,
           "relations": relations, "normalization": normalization}
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


RULES = """# SBV subject and VOB object of one pivot word. Raw predicates are mapped
# onto relations by the ontology's normalization table.
SBV 是 VOB → 是
SBV 属于 VOB → 属于
SBV 蕴含 VOB → 蕴含
SBV 象征 VOB → 象征
SBV 体现 VOB → 体现
SBV 来源于 VOB → 来源于
SBV 源于 VOB → 源于
"""

ALIASES = """# classifier label<TAB>pattern entity
bird\t鸟纹
butterfly\t蝴蝶纹
drum\t铜鼓纹
fish\t鱼纹
plant\t植物纹
"""


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "..", "data"))
    ap.add_argument("--seed", type=int, default=20240601)
    ap.add_argument("--cluster-export", help="review export written by `batik cluster`")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = os.path.abspath(args.out)

    triples, manual = build_triples(rng)
    manual_set = set(manual)
    text_triples = [t for t in triples if t not in manual_set]

    types = {}
    for p in CATEGORIES + all_patterns():
        types[p] = "纹样"
    for m in MEANINGS:
        types[m] = "寓意"
    for w in WORSHIPS:
        types[w] = "崇拜意识"
    for s in SOURCES:
        types[s] = "原型来源"
    assert len(types) == 120, len(types)
    for s, _, o in triples:
        assert s in types and o in types, (s, o)

    seeds = CATEGORIES + SEED_PATTERNS + MEANINGS + WORSHIPS + SOURCES
    assert len(seeds) == 50 and len(set(seeds)) == 50
    lexicon = [e for e in types if e not in seeds] + FUNCTION_WORDS + FILLER_WORDS

    # Relation sentences: pairs sharing an object go into coordinated
    # sentences, some triples get a second surface form.
    parses = []
    rng2 = random.Random(args.seed + 1)
    pending = text_triples[:]
    by_object = {}
    for t in pending:
        if t[1] == "蕴含":
            by_object.setdefault(t[2], []).append(t)
    coordinated_done = set()
    pairs = 0
    for obj in MEANINGS:
        group = by_object.get(obj, [])
        while len(group) >= 2 and pairs < COORDINATED_PAIRS:
            a, b = group.pop(0), group.pop(0)
            coordinated_done.update([a, b])
            parses.append((coordinated(a[0], b[0], "蕴含", obj), [a, b]))
            pairs += 1
    for t in pending:
        if t in coordinated_done:
            continue
        parses.append((sentence_for(t, 0), [t]))
    dup_pool = [t for t in pending if t not in coordinated_done and t[1] != "崇拜"]
    for t in rng2.sample(dup_pool, DUPLICATE_SENTENCES):
        parses.append((sentence_for(t, 1 if t[1] != "属于" else 2), [t]))
    for p in non_extracting():
        parses.append((p, []))
    rng2.shuffle(parses)
    # The worked example goes first.
    example = ("石榴纹", "属于", "植物纹")
    idx = next(i for i, (p, ts) in enumerate(parses) if ts == [example])
    parses.insert(0, parses.pop(idx))

    sentences = [text_of(p) for p, _ in parses]
    # Filler sentences until every entity reaches the minimum count.
    dictionary = set(seeds) | set(lexicon)
    max_len = max(len(w) for w in dictionary)
    counts = {}
    for s in sentences:
        for tok in tokenize(s, dictionary, max_len):
            counts[tok] = counts.get(tok, 0) + 1
    filler = []
    for e in types:
        templates = FILLERS[types[e]]
        k = 0
        while counts.get(e, 0) < 8:
            line = templates[k % len(templates)].format(e=e)
            filler.append(line)
            for tok in tokenize(line, dictionary, max_len):
                counts[tok] = counts.get(tok, 0) + 1
            k += 1
    corpus_lines = sentences + filler
    rng2.shuffle(corpus_lines)

    # Parse forms must match the tokenizer exactly.
    for p, _ in parses:
        forms = [f for f, _, _ in p]
        got = tokenize(text_of(p), dictionary, max_len)
        assert got == forms, (forms, got)
    for e in types:
        assert counts.get(e, 0) >= 8, e

    write(os.path.join(out, "ontology", "batik.json"), ontology())
    write(os.path.join(out, "ontology", "relations.rules"), RULES)
    write(os.path.join(out, "dict", "batik_terms.txt"),
          "# batik seed dictionary, one term per line, file order is priority\n" +
          "".join(s + "\n" for s in seeds))
    write(os.path.join(out, "dict", "lexicon.txt"),
          "# base lexicon for spans outside the seed dictionary\n" +
          "".join(s + "\n" for s in lexicon))
    write(os.path.join(out, "corpus", "bpkg.txt"), "".join(l + "\n" for l in corpus_lines))
    parse_text = []
    for i, (p, _) in enumerate(parses, 1):
        parse_text.append("# sent_id = %d\n# text = %s\n" % (i, text_of(p)))
        for j, (form, head, rel) in enumerate(p, 1):
            parse_text.append("%d\t%s\t%d\t%s\n" % (j, form, head, rel))
        parse_text.append("\n")
    write(os.path.join(out, "parses", "bpkg.conll"), "".join(parse_text))
    write(os.path.join(out, "bpkg", "entity_types.tsv"),
          "# entity<TAB>concept\n" + "".join("%s\t%s\n" % (e, c) for e, c in types.items()))
    write(os.path.join(out, "bpkg", "curated_triples.tsv"),
          "# triples added by hand during curation\n" +
          "".join("%s\t%s\t%s\n" % t for t in manual))
    write(os.path.join(out, "aliases.tsv"), ALIASES)

    # Review: keep exported candidates that are entities, drop the rest,
    # then add the entities no cluster proposed.
    seed_of_category = {c: c for c in CATEGORIES}
    rows = ["# seed\tcandidate\tsimilarity\tmark\n"]
    proposed = set()
    if args.cluster_export:
        with open(args.cluster_export, encoding="utf-8") as f:
            for line in f:
                if not line.strip() or line.startswith("#"):
                    continue
                seed, cand, sim, _ = line.rstrip("\n").split("\t")
                keep = cand in types and cand not in seeds and cand not in proposed
                if keep:
                    proposed.add(cand)
                rows.append("%s\t%s\t%s\t%s\n" % (seed, cand, sim, "keep" if keep else "drop"))
    for e in types:
        if e in seeds or e in proposed:
            continue
        seed = seed_of_category.get(category_of(e)) if types[e] == "纹样" else None
        if seed is None:
            seed = {"寓意": MEANINGS[0], "崇拜意识": WORSHIPS[0], "原型来源": SOURCES[0]}[types[e]]
        rows.append("%s\t%s\t-\tkeep\n" % (seed, e))
    write(os.path.join(out, "bpkg", "review.tsv"), "".join(rows))

    extracted = len({t for _, ts in parses for t in ts})
    print("entities=%d triples=%d text=%d curated=%d sentences=%d parses=%d" %
          (len(types), len(triples), extracted, len(manual), len(corpus_lines), len(parses)),
          file=sys.stderr)


if __name__ == "__main__":
    main()
