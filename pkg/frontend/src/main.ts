import { ApiClient } from "./api.js";
import { WorkbenchController } from "./controller.js";
import { render, wireKeyboard } from "./view.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("service") ?? "";
const prep = params.get("prep") ?? "through";
const tagger = params.get("tagger") ?? "annotator";

const controller = new WorkbenchController(new ApiClient(base), tagger);
wireKeyboard(controller);
void controller.load(prep).then(() => render(controller));
