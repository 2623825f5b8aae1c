from setuptools import setup

setup(
    name="libmetaact",
    version="0.1.0",
    packages=[
        "libmetaact",
        "libmetaact.autograd",
        "libmetaact.complexity",
        "libmetaact.experiments",
        "libmetaact.metaglobal",
        "libmetaact.metalearn",
        "libmetaact.nets",
        "libmetaact.splines",
        "libmetaact.tasks",
        "libmetaact.training",
    ],
    package_dir={"": "python"},
    include_package_data=False,
)
