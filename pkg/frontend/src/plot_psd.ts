import { runFigure } from "./cli";

process.exit(runFigure("psd", process.argv.slice(2)));
