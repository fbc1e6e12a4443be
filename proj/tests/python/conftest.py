import importlib.util
import os
import sys
from pathlib import Path

# Use the extension from the build tree when ctest points us at it;
# otherwise rely on an installed package.
_module_dir = os.environ.get("QXX_MODULE_DIR")
if _module_dir:
    sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "python"))
    for name in os.listdir(_module_dir):
        if name.startswith("_core.") and name.endswith((".so", ".pyd")):
            spec = importlib.util.spec_from_file_location(
                "qxx._core", os.path.join(_module_dir, name))
            module = importlib.util.module_from_spec(spec)
            sys.modules["qxx._core"] = module
            spec.loader.exec_module(module)
            break
