"""Descriptor bundles and the seven prompt strings they generate."""

from stylegap.prompts import build_prompts, packaged_bundle

for name in ("billie_eilish", "ludovico_einaudi"):
    bundle = packaged_bundle(name)
    prompts = build_prompts(bundle)
    print(f"== {bundle.artist_name} ==")
    print("baseline:   ", prompts.baseline_prompt)
    print("artist-name:", prompts.artist_name_prompt)
    for k, styled in enumerate(prompts.styled_prompts, start=1):
        print(f"styled {k}:   ", styled)
    print()

# Styled prompts are the baseline plus the three tokens of one set,
# joined with ", "; the artist-name prompt appends " [<name>]".
