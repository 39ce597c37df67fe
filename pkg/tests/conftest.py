import hypothesis

hypothesis.settings.register_profile(
    "repro",
    deadline=None,
    derandomize=True,
    max_examples=60,
)
hypothesis.settings.load_profile("repro")
