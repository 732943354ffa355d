import { runFigure } from "./cli";

process.exit(runFigure("timeeff", process.argv.slice(2)));
