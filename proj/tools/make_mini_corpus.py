"""Regenerates data/mini_corpus.tsv, a small synthetic short-text corpus."""
import random

THEMES = {
    "imaging": "ct lung opacity ground glass chest scan subpleural lesion radiograph consolidation",
    "vaccine": "vaccine dose antibody immune response trial efficacy booster mrna neutralizing",
    "mental": "anxiety depression stress lockdown wellbeing student isolation sleep loneliness worker",
    "transmission": "transmission spread contact household mask distance aerosol droplet quarantine tracing",
    "treatment": "patient icu ventilation oxygen drug remdesivir steroid mortality hospital admission",
    "economy": "economic market supply chain unemployment business income policy trade recovery",
}
SHARED = "covid pandemic virus case data study result sars"


def main(path="data/mini_corpus.tsv", docs=360, seed=7):
    rng = random.Random(seed)
    themes = {k: v.split() for k, v in THEMES.items()}
    shared = SHARED.split()
    names = sorted(themes)
    with open(path, "w") as out:
        for d in range(docs):
            main_theme = names[d % len(names)]
            other = rng.choice(names)
            tokens = []
            for _ in range(rng.randint(6, 11)):
                r = rng.random()
                if r < 0.7:
                    tokens.append(rng.choice(themes[main_theme]))
                elif r < 0.85:
                    tokens.append(rng.choice(shared))
                else:
                    tokens.append(rng.choice(themes[other]))
            out.write(f"doc{d:04d}\t{' '.join(tokens)}\n")


if __name__ == "__main__":
    main()
