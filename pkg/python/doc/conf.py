# -- package specific configuration --
project = "libmetaact"
version = "0.1"  # The short X.Y version.
release = "0.1.0"  # The full version, including alpha/beta/rc tags.
project_desc = "Meta-learned spline activation functions and function complexity"
logo_text = "libmetaact"


# -- General configuration ------------------------------------------------

autoclass_content = "both"
autosummary_generate = True
autosummary_imported_members = True
numpydoc_show_class_members = False
autodoc_typehints_format = "short"
python_use_unqualified_type_names = True
autodoc_inherit_docstrings = False
add_module_names = True

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
    "sklearn": ("https://scikit-learn.org/stable/", None),
}

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.coverage",
    "sphinx.ext.viewcode",
    "sphinx.ext.githubpages",
    "sphinx.ext.napoleon",
    "sphinxarg.ext",
    "sphinx.ext.intersphinx",
    "numpydoc",
]

# Napoleon settings
napoleon_google_docstring = False
napoleon_numpy_docstring = True
python_maximum_signature_line_length = 20

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

copyright = "2026, libmetaact developers"
author = "libmetaact developers"

language = "en"
exclude_patterns = []
todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "pydata_sphinx_theme"
html_theme_options = {
    "logo": {
        "text": logo_text,
    },
    "pygment_light_style": "xcode",
    "pygment_dark_style": "lightbulb",
}

htmlhelp_basename = "libmetaactdoc"

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (
        master_doc,
        f"{project}.tex",
        f"{project} Documentation",
        author,
        "manual",
    ),
]

# -- Options for manual page output ---------------------------------------

man_pages = [(master_doc, f"{project}", f"{project} Documentation", [author], 1)]

# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    (
        master_doc,
        f"{project}",
        f"{project} Documentation",
        author,
        f"{project}",
        project_desc,
        "Miscellaneous",
    ),
]
